//! Gaussian-state description of the protocol without amplification.
//!
//! The entanglement-based picture shares a two-mode squeezed vacuum of EPR
//! parameter `λ`; Bob's half crosses a channel of transmittance `T` and
//! input-referred excess noise `ε`. The resulting covariance matrix has the
//! block form `[[a·I, c·Z], [c·Z, b·I]]` with
//!
//! ```text
//! a = V(λ),  b = T·(V(λ) + B + ε),  c = √(T·(V(λ)² − 1)),
//! V(λ) = (1 + λ²)/(1 − λ²),  B = (1 − T)/T.
//! ```

use crate::error::{domain, Error, Result};

/// Below this, a negative `G` argument is a domain error rather than rounding noise.
pub const G_TOLERANCE: f64 = 1e-9;

/// Symplectic eigenvalues in `[1 − SYMPLECTIC_TOLERANCE, 1)` are clamped to 1.
pub const SYMPLECTIC_TOLERANCE: f64 = 1e-6;

/// Relative tolerance on the radicands `A² − 4E` and `C² − 4D`.
pub const RADICAND_TOLERANCE: f64 = 1e-12;

/// Converts losses in dB to a power transmittance.
pub fn db_to_transmittance(loss_db: f64) -> f64 {
    libm::pow(10.0, -loss_db / 10.0)
}

/// Converts a power transmittance to losses in dB.
pub fn transmittance_to_db(transmittance: f64) -> f64 {
    -10.0 * libm::log10(transmittance)
}

/// Variance `(1 + λ²)/(1 − λ²)` of the reduced thermal state of a two-mode squeezed vacuum.
pub fn thermal_variance(lambda: f64) -> f64 {
    let l2 = lambda * lambda;
    (1.0 + l2) / (1.0 - l2)
}

/// Inverse of [`thermal_variance`].
pub fn lambda_from_variance(variance: f64) -> f64 {
    libm::sqrt((variance - 1.0) / (variance + 1.0))
}

/// A lossy, noisy phase-insensitive Gaussian channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    transmittance: f64,
    excess_noise: f64,
}

impl ChannelParams {
    pub fn new(transmittance: f64, excess_noise: f64) -> Result<Self> {
        if !(transmittance > 0.0 && transmittance <= 1.0) {
            return Err(domain("transmittance must lie in (0, 1]", transmittance));
        }
        if !(0.0..2.0).contains(&excess_noise) {
            return Err(domain("excess noise must lie in [0, 2)", excess_noise));
        }
        Ok(Self {
            transmittance,
            excess_noise,
        })
    }

    pub fn from_loss_db(loss_db: f64, excess_noise: f64) -> Result<Self> {
        if !(loss_db >= 0.0) || !loss_db.is_finite() {
            return Err(domain("losses must be finite and non-negative", loss_db));
        }
        Self::new(db_to_transmittance(loss_db), excess_noise)
    }

    pub fn transmittance(&self) -> f64 {
        self.transmittance
    }

    pub fn excess_noise(&self) -> f64 {
        self.excess_noise
    }

    pub fn loss_db(&self) -> f64 {
        transmittance_to_db(self.transmittance)
    }

    /// Input-referred noise `(1 − T)/T` due to the losses alone.
    pub fn loss_noise(&self) -> f64 {
        (1.0 - self.transmittance) / self.transmittance
    }

    /// Total input-referred noise `χ_line = (1 − T)/T + ε`.
    pub fn line_noise(&self) -> f64 {
        self.loss_noise() + self.excess_noise
    }
}

/// Model for the NLA heralding probability.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PsucModel {
    /// The most optimistic value, `1/g²`.
    #[default]
    UpperBound,
    /// A fixed probability in `(0, 1]`, independent of the gain.
    Constant(f64),
}

impl PsucModel {
    pub fn probability(&self, gain: f64) -> f64 {
        match *self {
            PsucModel::UpperBound => crate::nla::success_probability_bound(gain),
            PsucModel::Constant(p) => p,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            PsucModel::UpperBound => Ok(()),
            PsucModel::Constant(p) if p > 0.0 && p <= 1.0 => Ok(()),
            PsucModel::Constant(p) => Err(domain("success probability must lie in (0, 1]", p)),
        }
    }
}

/// Alice and Bob's choices: EPR parameter, reconciliation efficiency and NLA gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    epr_lambda: f64,
    recon_beta: f64,
    gain: f64,
    psuc: PsucModel,
}

impl ProtocolParams {
    pub fn new(epr_lambda: f64, recon_beta: f64, gain: f64, psuc: PsucModel) -> Result<Self> {
        if !(0.0..1.0).contains(&epr_lambda) {
            return Err(domain("EPR parameter must lie in [0, 1)", epr_lambda));
        }
        if !(recon_beta > 0.0 && recon_beta <= 1.0) {
            return Err(domain("reconciliation efficiency must lie in (0, 1]", recon_beta));
        }
        if !(gain >= 1.0) || !gain.is_finite() {
            return Err(domain("NLA gain must be finite and at least 1", gain));
        }
        psuc.validate()?;
        Ok(Self {
            epr_lambda,
            recon_beta,
            gain,
            psuc,
        })
    }

    /// Protocol without an amplifier (`g = 1`).
    pub fn without_nla(epr_lambda: f64, recon_beta: f64) -> Result<Self> {
        Self::new(epr_lambda, recon_beta, 1.0, PsucModel::UpperBound)
    }

    /// Same protocol with a different EPR parameter.
    pub fn with_lambda(&self, epr_lambda: f64) -> Result<Self> {
        Self::new(epr_lambda, self.recon_beta, self.gain, self.psuc)
    }

    pub fn epr_lambda(&self) -> f64 {
        self.epr_lambda
    }

    pub fn recon_beta(&self) -> f64 {
        self.recon_beta
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn psuc(&self) -> PsucModel {
        self.psuc
    }

    pub fn success_probability(&self) -> f64 {
        self.psuc.probability(self.gain)
    }

    pub fn variance(&self) -> f64 {
        thermal_variance(self.epr_lambda)
    }

    /// Alice's modulation variance `V_A = V − 1`.
    pub fn modulation_variance(&self) -> f64 {
        self.variance() - 1.0
    }
}

/// Two-mode covariance matrix `[[a·I, c·Z], [c·Z, b·I]]`, `Z = diag(1, −1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCovariance {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TwoModeCovariance {
    /// The full 4×4 matrix in `(x_A, p_A, x_B, p_B)` ordering.
    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let Self { a, b, c } = *self;
        [
            [a, 0.0, c, 0.0],
            [0.0, a, 0.0, -c],
            [c, 0.0, b, 0.0],
            [0.0, -c, 0.0, b],
        ]
    }

    /// Symplectic eigenvalues `(ν₊, ν₋)` from the two-mode invariants.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        let Self { a, b, c } = *self;
        let delta = a * a + b * b - 2.0 * c * c;
        let det = a * b - c * c;
        // Δ² − 4det² = (a − b)²·((a + b)² − 4c²)
        let spread = ((a + b) * (a + b) - 4.0 * c * c).max(0.0);
        let plus2 = 0.5 * (delta + (a - b).abs() * libm::sqrt(spread));
        let plus = libm::sqrt(plus2);
        let minus = if plus > 0.0 { det.abs() / plus } else { 0.0 };
        (plus, minus)
    }

    /// Both symplectic eigenvalues at least `1 − tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        let (_, minus) = self.symplectic_eigenvalues();
        self.a >= 1.0 - tol && self.b >= 1.0 - tol && minus >= 1.0 - tol
    }
}

/// Outcome of a key-rate evaluation.
///
/// `key_rate = success_probability · (β·mutual_info − holevo)`; the
/// success probability is 1 without amplification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyRateResult {
    pub mutual_info: f64,
    pub holevo: f64,
    pub success_probability: f64,
    pub key_rate: f64,
}

impl KeyRateResult {
    /// Rate per heralded event, before the success-probability scaling.
    pub fn postselected_rate(&self) -> f64 {
        self.key_rate / self.success_probability
    }
}

/// `G[x] = (x + 1)·log₂(x + 1) − x·log₂(x)`, with `G[0] = 0`.
pub fn g_func(x: f64) -> Result<f64> {
    if x.is_nan() || x < -G_TOLERANCE {
        return Err(domain("G argument must be non-negative", x));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    let ln2 = core::f64::consts::LN_2;
    if x < 1.0 {
        Ok((x + 1.0) * libm::log2(x + 1.0) - x * libm::log2(x))
    } else {
        // same expression, regrouped so large arguments do not cancel
        Ok(libm::log2(x + 1.0) + x * libm::log1p(1.0 / x) / ln2)
    }
}

/// Covariance matrix of the state shared by Alice and Bob.
pub fn build_covariance(protocol: &ProtocolParams, channel: &ChannelParams) -> TwoModeCovariance {
    covariance_raw(protocol.epr_lambda, channel.transmittance, channel.excess_noise)
}

pub(crate) fn covariance_raw(lambda: f64, t: f64, eps: f64) -> TwoModeCovariance {
    let v = thermal_variance(lambda);
    let b_loss = (1.0 - t) / t;
    TwoModeCovariance {
        a: v,
        b: t * (v + b_loss + eps),
        c: libm::sqrt(t * (v * v - 1.0)),
    }
}

/// Shannon mutual information `½·log₂((V + B + ε)/(1 + B + ε))` for homodyne detection.
pub fn mutual_information(protocol: &ProtocolParams, channel: &ChannelParams) -> f64 {
    mutual_information_raw(protocol.epr_lambda, channel.transmittance, channel.excess_noise)
}

pub(crate) fn mutual_information_raw(lambda: f64, t: f64, eps: f64) -> f64 {
    let v = thermal_variance(lambda);
    let noise = (1.0 - t) / t + eps;
    0.5 * libm::log2((v + noise) / (1.0 + noise))
}

/// The four symplectic eigenvalues entering the Holevo bound.
///
/// `μ₁, μ₂` belong to the Alice–Bob state, `μ₃, μ₄` to Alice's state
/// conditioned on Bob's homodyne outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolevoSpectrum {
    pub mu: [f64; 4],
}

pub(crate) fn holevo_spectrum_raw(lambda: f64, t: f64, eps: f64) -> Result<HolevoSpectrum> {
    let v = thermal_variance(lambda);
    let chi_line = (1.0 - t) / t + eps;

    // A = V²(1 − 2T) + 2T + T²(V + χ)², expanded so the V² terms combine
    // into V²(1 − T)² without cancellation.
    let one_minus_t = 1.0 - t;
    let a_coef = v * v * one_minus_t * one_minus_t
        + 2.0 * t * t * v * chi_line
        + t * t * chi_line * chi_line
        + 2.0 * t;
    let sqrt_e = t * (v * chi_line + 1.0);
    let d_coef = sqrt_e * v / (t * (v + chi_line));
    let c_coef = (v * sqrt_e + t * (v + chi_line)) / (t * (v + chi_line));

    // A² − 4E = (a − b)²·((a + b)² − 4c²) in terms of the covariance entries,
    // and C² − 4D = (D − 1)² since C = D + 1
    let b_cov = t * (v + chi_line);
    let c_sq = t * (v * v - 1.0);
    let spread = (v + b_cov) * (v + b_cov) - 4.0 * c_sq;
    let disc_ab = (v - b_cov).abs() * libm::sqrt(checked_radicand(spread, a_coef)?);
    let disc_cond = (d_coef - 1.0).abs();
    let _ = checked_radicand(c_coef * c_coef - 4.0 * d_coef, c_coef)?;

    let (mu1, mu2) = eigen_pair(a_coef, disc_ab, sqrt_e);
    let (mu3, mu4) = eigen_pair(c_coef, disc_cond, libm::sqrt(d_coef));

    let mut mu = [mu1, mu2, mu3, mu4];
    for m in mu.iter_mut() {
        if *m < 1.0 {
            if *m < 1.0 - SYMPLECTIC_TOLERANCE || m.is_nan() {
                return Err(Error::Physicality {
                    what: "symplectic eigenvalue below vacuum",
                    value: *m,
                });
            }
            *m = 1.0;
        }
    }
    Ok(HolevoSpectrum { mu })
}

/// Clamps round-off negatives of a discriminant to zero.
fn checked_radicand(radicand: f64, scale: f64) -> Result<f64> {
    if radicand >= 0.0 {
        return Ok(radicand);
    }
    if radicand < -RADICAND_TOLERANCE * (scale * scale).max(1.0) || radicand.is_nan() {
        return Err(Error::Physicality {
            what: "negative radicand in symplectic spectrum",
            value: radicand,
        });
    }
    Ok(0.0)
}

/// Roots of `μ⁴ − s·μ² + p = 0` given `√(s² − 4p)`; the small root uses `μ₊·μ₋ = √p`.
fn eigen_pair(s: f64, sqrt_disc: f64, sqrt_p: f64) -> (f64, f64) {
    let plus = libm::sqrt(0.5 * (s + sqrt_disc));
    let minus = if plus > 0.0 { sqrt_p / plus } else { 0.0 };
    (plus, minus)
}

pub(crate) fn holevo_raw(lambda: f64, t: f64, eps: f64) -> Result<f64> {
    let HolevoSpectrum { mu } = holevo_spectrum_raw(lambda, t, eps)?;
    let g = |m: f64| g_func(0.5 * (m - 1.0));
    let chi = g(mu[0])? + g(mu[1])? - g(mu[2])? - g(mu[3])?;
    Ok(chi.max(0.0))
}

/// Holevo bound `χ_BE` on Eve's information about Bob's homodyne data.
pub fn holevo_bound(protocol: &ProtocolParams, channel: &ChannelParams) -> Result<f64> {
    holevo_raw(protocol.epr_lambda, channel.transmittance, channel.excess_noise)
}

/// Symplectic eigenvalues `μ₁..μ₄` for the given parameters.
pub fn holevo_spectrum(protocol: &ProtocolParams, channel: &ChannelParams) -> Result<HolevoSpectrum> {
    holevo_spectrum_raw(protocol.epr_lambda, channel.transmittance, channel.excess_noise)
}

/// Reverse-reconciliation key rate `β·I_AB − χ_BE` without amplification.
///
/// The protocol's gain is ignored here; see [`crate::nla::key_rate_nla`].
pub fn key_rate(protocol: &ProtocolParams, channel: &ChannelParams) -> Result<KeyRateResult> {
    key_rate_raw(
        protocol.epr_lambda,
        channel.transmittance,
        channel.excess_noise,
        protocol.recon_beta,
        1.0,
    )
}

/// Key rate for raw parameters; used for effective (post-NLA) channels whose
/// excess noise may leave the range accepted by [`ChannelParams`].
pub(crate) fn key_rate_raw(
    lambda: f64,
    t: f64,
    eps: f64,
    beta: f64,
    success_probability: f64,
) -> Result<KeyRateResult> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(domain("transmittance must lie in (0, 1]", t));
    }
    if !(0.0..1.0).contains(&lambda) {
        return Err(domain("EPR parameter must lie in [0, 1)", lambda));
    }
    if !(eps >= 0.0) {
        return Err(domain("excess noise must be non-negative", eps));
    }
    let mutual_info = mutual_information_raw(lambda, t, eps);
    let holevo = holevo_raw(lambda, t, eps)?;
    Ok(KeyRateResult {
        mutual_info,
        holevo,
        success_probability,
        key_rate: success_probability * (beta * mutual_info - holevo),
    })
}
