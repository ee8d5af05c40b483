use crate::nla::BindingConstraint;

/// Errors raised by the key-rate, mapping, search and oracle routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("unphysical covariance: {what} (got {value})")]
    Physicality { what: &'static str, value: f64 },

    #[error("effective parameters infeasible: {0}")]
    Infeasible(BindingConstraint),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("no sign change found for {what} on [{lo}, {hi}]")]
    NoBracket { what: &'static str, lo: f64, hi: f64 },

    #[error("key rate still positive at {max_db} dB; no loss limit in range")]
    NoCrossing { max_db: f64 },

    #[error("optimized key rate is not positive anywhere in the searched range")]
    NotPositive,

    #[error("Fock truncation at dim {dim} loses {deficit:e} of the trace")]
    Truncation { dim: usize, deficit: f64 },

    #[error("amplified state diverges at dim {dim} (tail ratio {ratio})")]
    Divergence { dim: usize, ratio: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
