//! Asymptotic secret key rates for the Gaussian-modulated coherent-state
//! CV-QKD protocol with reverse reconciliation, with and without an ideal
//! noiseless linear amplifier (NLA) in front of Bob's homodyne detector.
//!
//! All quantities are in shot-noise units (vacuum quadrature variance 1) and
//! information is measured in bits per channel use.
//!
//! - [`gaussian`]: covariance matrix, mutual information, Holevo bound, key rate.
//! - [`nla`]: the effective-channel mapping `(λ, T, ε, g) → (ζ, η, ε^g)`, its
//!   feasibility limits and the amplified key rate.
//! - [`asymptotics`]: strong-loss expansion, closed-form loss limit, optimal EPR parameter.
//! - [`optimizer`]: 1-D maximization and zero-crossing searches over the full formulas.
//! - [`fock`]: a truncated Fock-space oracle that checks the mapping by brute force.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod asymptotics;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod nla;
pub mod optimizer;
pub mod search;

pub use error::{Error, Result};
pub use gaussian::{ChannelParams, KeyRateResult, ProtocolParams, PsucModel, TwoModeCovariance};
pub use nla::{BindingConstraint, EffectiveParams, NlaAuxiliaries};
