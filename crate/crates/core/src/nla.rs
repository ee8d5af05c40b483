//! Effective-channel description of a successful noiseless linear amplification.
//!
//! An EPR state `|λ⟩` sent through a channel `(T, ε)` and then amplified by
//! the ideal NLA `g^n̂` has the same Alice–Bob covariance matrix as an EPR
//! state `|ζ⟩` sent through a channel `(η, ε^g)` with no amplifier:
//!
//! ```text
//! ζ   = λ·√[((g²−1)(ε−2)T − 2) / ((g²−1)εT − 2)]
//! η   = g²T / [(g²−1)T·(¼(g²−1)(ε−2)εT − ε + 1) + 1]
//! ε^g = ε − ½(g²−1)(ε−2)εT
//! ```
//!
//! The mapping only describes a physical system when `0 ≤ ζ < 1`,
//! `0 ≤ η ≤ 1` and `ε^g ≥ 0`, and the amplified thermal states stay
//! normalizable (`g·λ_ch < 1`).

use core::fmt;

use crate::error::{domain, Error, Result};
use crate::gaussian::{key_rate_raw, ChannelParams, KeyRateResult, ProtocolParams};

/// The first physicality condition violated by an effective parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BindingConstraint {
    None,
    ZetaGeOne,
    EtaGtOne,
    EpsNegative,
    GainCutoff,
}

impl BindingConstraint {
    pub fn as_str(&self) -> &'static str {
        match self {
            BindingConstraint::None => "none",
            BindingConstraint::ZetaGeOne => "zeta>=1",
            BindingConstraint::EtaGtOne => "eta>1",
            BindingConstraint::EpsNegative => "eps_g<0",
            BindingConstraint::GainCutoff => "g*lambda_ch>=1",
        }
    }
}

impl fmt::Display for BindingConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The equivalent no-amplifier triple `(ζ, η, ε^g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    pub zeta: f64,
    pub eta: f64,
    pub eps_g: f64,
    pub feasible: bool,
    pub binding_constraint: BindingConstraint,
}

/// Thermal parameters and displacement gain seen by the amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlaAuxiliaries {
    /// Thermal parameter of Bob's state conditioned on Alice's heterodyne outcome.
    pub lambda_ch: f64,
    /// Thermal parameter of Bob's unconditional state.
    pub lambda_star: f64,
    /// Gain applied to the conditional displacement, `g(1 − λ_ch²)/(1 − g²λ_ch²)`.
    pub g_tilde: f64,
}

/// Upper bound `1/g²` on the heralding probability of an ideal NLA.
pub fn success_probability_bound(gain: f64) -> f64 {
    1.0 / (gain * gain)
}

/// Ratio under the square root in `ζ = λ·√ratio`; independent of `λ`.
fn zeta_ratio(t: f64, eps: f64, gain: f64) -> f64 {
    let h = gain * gain - 1.0;
    (h * (eps - 2.0) * t - 2.0) / (h * eps * t - 2.0)
}

fn eta_raw(t: f64, eps: f64, gain: f64) -> f64 {
    let h = gain * gain - 1.0;
    gain * gain * t / (h * t * (0.25 * h * (eps - 2.0) * eps * t - eps + 1.0) + 1.0)
}

fn eps_g_raw(t: f64, eps: f64, gain: f64) -> f64 {
    let h = gain * gain - 1.0;
    eps - 0.5 * h * (eps - 2.0) * eps * t
}

/// `λ_ch² = Tε/(2 + Tε)`.
pub(crate) fn lambda_ch_sq(t: f64, eps: f64) -> f64 {
    t * eps / (2.0 + t * eps)
}

/// `λ*² = T(λ²(2 − ε) + ε) / (2 − λ²(2 + T(ε − 2)) + Tε)`.
pub(crate) fn lambda_star_sq(lambda: f64, t: f64, eps: f64) -> f64 {
    let l2 = lambda * lambda;
    t * (l2 * (2.0 - eps) + eps) / (2.0 - l2 * (2.0 + t * (eps - 2.0)) + t * eps)
}

/// The λ-independent part of the feasibility test: `η ≤ 1`, `ε^g ≥ 0`, `g·λ_ch < 1`.
pub(crate) fn channel_constraint(t: f64, eps: f64, gain: f64) -> BindingConstraint {
    let eta = eta_raw(t, eps, gain);
    if !(0.0..=1.0).contains(&eta) {
        return BindingConstraint::EtaGtOne;
    }
    if !(eps_g_raw(t, eps, gain) >= 0.0) {
        return BindingConstraint::EpsNegative;
    }
    if !(gain * libm::sqrt(lambda_ch_sq(t, eps)) < 1.0) {
        return BindingConstraint::GainCutoff;
    }
    BindingConstraint::None
}

pub(crate) fn effective_params_raw(lambda: f64, t: f64, eps: f64, gain: f64) -> Result<EffectiveParams> {
    if !(eps < 2.0) {
        return Err(domain("the NLA mapping requires excess noise below 2", eps));
    }
    if !(gain >= 1.0) {
        return Err(domain("NLA gain must be at least 1", gain));
    }
    let ratio = zeta_ratio(t, eps, gain);
    let zeta = if ratio >= 0.0 { lambda * libm::sqrt(ratio) } else { f64::NAN };
    let eta = eta_raw(t, eps, gain);
    let eps_g = eps_g_raw(t, eps, gain);

    // Channel-level constraints first: no choice of λ repairs them.
    let mut binding = channel_constraint(t, eps, gain);
    if binding == BindingConstraint::None && !(0.0..1.0).contains(&zeta) {
        binding = BindingConstraint::ZetaGeOne;
    }
    Ok(EffectiveParams {
        zeta,
        eta,
        eps_g,
        feasible: binding == BindingConstraint::None,
        binding_constraint: binding,
    })
}

/// Maps `(λ, T, ε, g)` to the equivalent no-amplifier parameters.
///
/// Infeasible inputs are not an error: the result carries `feasible = false`
/// and names the first violated constraint.
pub fn effective_params(protocol: &ProtocolParams, channel: &ChannelParams) -> Result<EffectiveParams> {
    effective_params_raw(
        protocol.epr_lambda(),
        channel.transmittance(),
        channel.excess_noise(),
        protocol.gain(),
    )
}

pub(crate) fn lambda_limit_raw(t: f64, eps: f64, gain: f64) -> f64 {
    let ratio = zeta_ratio(t, eps, gain);
    if ratio > 0.0 {
        1.0 / libm::sqrt(ratio)
    } else {
        0.0
    }
}

/// Supremum of the EPR parameters `λ` for which `ζ < 1`.
///
/// Returns 0 when the gain is so large that `ζ` is undefined for every `λ > 0`.
pub fn lambda_limit(channel: &ChannelParams, gain: f64) -> Result<f64> {
    if !(gain >= 1.0) {
        return Err(domain("NLA gain must be at least 1", gain));
    }
    Ok(lambda_limit_raw(channel.transmittance(), channel.excess_noise(), gain))
}

/// `λ` that produces a given effective `ζ` on this channel.
pub fn lambda_for_zeta(zeta: f64, channel: &ChannelParams, gain: f64) -> f64 {
    zeta * lambda_limit_raw(channel.transmittance(), channel.excess_noise(), gain)
}

pub(crate) fn g_max_raw(t: f64, eps: f64) -> f64 {
    if eps == 0.0 {
        return f64::INFINITY;
    }
    let inner = t * (eps - 2.0) + 2.0;
    let num = eps * (t * (eps - 4.0) + 2.0) + 4.0 * libm::sqrt(inner / eps)
        - 2.0 * libm::sqrt(eps * inner)
        + 4.0 * t
        - 4.0;
    let den = t * (eps - 2.0) * (eps - 2.0);
    libm::sqrt(num / den)
}

/// Largest gain for which the effective parameters stay physical.
///
/// Without excess noise there is no finite bound and `f64::INFINITY` is returned.
pub fn g_max(channel: &ChannelParams) -> f64 {
    g_max_raw(channel.transmittance(), channel.excess_noise())
}

/// Key rate with the NLA, `P_suc · (β·I_AB − χ_BE)` evaluated on `(ζ, η, ε^g)`.
pub fn key_rate_nla(protocol: &ProtocolParams, channel: &ChannelParams) -> Result<KeyRateResult> {
    let eff = effective_params(protocol, channel)?;
    if !eff.feasible {
        return Err(Error::Infeasible(eff.binding_constraint));
    }
    key_rate_raw(
        eff.zeta,
        eff.eta,
        eff.eps_g,
        protocol.recon_beta(),
        protocol.success_probability(),
    )
}

/// `λ_ch`, `λ*` and `g̃` for the given protocol and channel.
pub fn nla_auxiliaries(protocol: &ProtocolParams, channel: &ChannelParams) -> Result<NlaAuxiliaries> {
    let t = channel.transmittance();
    let eps = channel.excess_noise();
    let gain = protocol.gain();
    let lch2 = lambda_ch_sq(t, eps);
    let lambda_ch = libm::sqrt(lch2);
    let lambda_star = libm::sqrt(lambda_star_sq(protocol.epr_lambda(), t, eps));
    if !(gain * lambda_ch < 1.0) || !(gain * lambda_star < 1.0) {
        return Err(Error::Infeasible(BindingConstraint::GainCutoff));
    }
    Ok(NlaAuxiliaries {
        lambda_ch,
        lambda_star,
        g_tilde: gain * (1.0 - lch2) / (1.0 - gain * gain * lch2),
    })
}
