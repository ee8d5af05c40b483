//! Brute-force check of the effective-channel mapping in a truncated Fock basis.
//!
//! Quadrature convention: `x̂ = â + â†`, `p̂ = −i(â − â†)`, vacuum variance 1,
//! so a coherent state `|α⟩` has mean `(2 Re α, 2 Im α)`.
//!
//! The two-mode state is never formed. Alice's heterodyne outcome `α_A`
//! prepares, on Bob's side, a thermal state of parameter `λ_ch` displaced by
//! `√T·λ·α_A*`. Each conditional state is amplified by `g^n̂` in the Fock
//! basis, its heralding weight is kept, and the post-selected Alice–Bob
//! covariance matrix is assembled from the weighted conditional moments.

mod displacement;
pub mod quadrature;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::gaussian::{covariance_raw, ChannelParams, ProtocolParams, TwoModeCovariance};
use crate::nla::{effective_params, nla_auxiliaries};

pub use displacement::displacement_matrix;

/// Largest acceptable truncation loss when building a state.
pub const BUILD_DEFICIT: f64 = 1e-10;
/// Largest acceptable estimated tail after amplification.
pub const AMPLIFIED_DEFICIT: f64 = 1e-8;

/// Single-mode density operator on the Fock states `|0⟩..|dim−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    dim: usize,
    /// Row-major `dim × dim`.
    matrix: Vec<Complex64>,
    /// Probability mass outside the retained basis.
    trace_deficit: f64,
}

/// Quadrature means and variances of a single mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

impl TruncatedState {
    pub fn from_matrix(dim: usize, matrix: Vec<Complex64>, trace_deficit: f64) -> Result<Self> {
        if dim == 0 || matrix.len() != dim * dim {
            return Err(domain("matrix length must be dim²", matrix.len() as f64));
        }
        Ok(Self {
            dim,
            matrix,
            trace_deficit,
        })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        make_displaced_thermal(0.0, 0.0, 0.0, dim)
    }

    /// Thermal state `(1 − λ²)·Σ λ^{2n} |n⟩⟨n|`.
    pub fn thermal(lambda: f64, dim: usize) -> Result<Self> {
        make_displaced_thermal(lambda, 0.0, 0.0, dim)
    }

    /// Coherent state `|α⟩⟨α|`.
    pub fn coherent(alpha: Complex64, dim: usize) -> Result<Self> {
        make_displaced_thermal(0.0, alpha.re, alpha.im, dim)
    }

    /// Pure state from Fock amplitudes (not renormalized).
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
        for m in 0..dim {
            for n in 0..dim {
                matrix[m * dim + n] = amplitudes[m] * amplitudes[n].conj();
            }
        }
        let trace: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        Self::from_matrix(dim, matrix, (1.0 - trace).max(0.0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.matrix[m * self.dim + n]
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|n| self.get(n, n).re).sum()
    }

    /// Photon-number distribution `⟨n|ρ|n⟩`.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim).map(|n| self.get(n, n).re).collect()
    }

    /// Largest `|ρ_mn − ρ_nm*|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for m in 0..self.dim {
            for n in m..self.dim {
                worst = worst.max((self.get(m, n) - self.get(n, m).conj()).norm());
            }
        }
        worst
    }

    /// `⟨ψ|ρ|ψ⟩` for a (truncated) pure state.
    pub fn overlap_with_pure(&self, amplitudes: &[Complex64]) -> f64 {
        let d = self.dim.min(amplitudes.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..d {
            for n in 0..d {
                acc += amplitudes[m].conj() * self.get(m, n) * amplitudes[n];
            }
        }
        acc.re
    }

    /// Largest entry-wise distance to another state of the same dimension.
    pub fn max_abs_diff(&self, other: &TruncatedState) -> f64 {
        self.matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Fock amplitudes of `|α⟩` truncated to `dim` levels.
pub fn coherent_amplitudes(alpha: Complex64, dim: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(dim);
    let mut c = Complex64::new(libm::exp(-0.5 * alpha.norm_sqr()), 0.0);
    for n in 0..dim {
        out.push(c);
        c = c * alpha / libm::sqrt((n + 1) as f64);
    }
    out
}

/// `D(β)·ρ_th(λ_th)·D(−β)` in the Fock basis.
///
/// The thermal weights are displaced by the real displacement matrix of
/// radius `|β|` and then rotated by `arg β`.
pub fn make_displaced_thermal(lambda_th: f64, beta_x: f64, beta_y: f64, dim: usize) -> Result<TruncatedState> {
    if !(0.0..1.0).contains(&lambda_th) {
        return Err(domain("thermal parameter must lie in [0, 1)", lambda_th));
    }
    if dim == 0 {
        return Err(domain("Fock dimension must be positive", 0.0));
    }
    let l2 = lambda_th * lambda_th;
    let mut weights = Vec::with_capacity(dim);
    let mut p = 1.0 - l2;
    for _ in 0..dim {
        weights.push(p);
        p *= l2;
    }

    let r = libm::hypot(beta_x, beta_y);
    let phi = libm::atan2(beta_y, beta_x);
    let d = displacement_matrix(r, dim);

    // ρ(r)_mn = Σ_k D_mk p_k D_nk, symmetric
    let mut real = vec![0.0_f64; dim * dim];
    for m in 0..dim {
        let row_m = &d[m * dim..(m + 1) * dim];
        for n in 0..=m {
            let row_n = &d[n * dim..(n + 1) * dim];
            let mut acc = 0.0;
            for k in 0..dim {
                acc += row_m[k] * weights[k] * row_n[k];
            }
            real[m * dim + n] = acc;
            real[n * dim + m] = acc;
        }
    }

    let phases: Vec<Complex64> = (0..dim)
        .map(|k| Complex64::from_polar(1.0, phi * k as f64))
        .collect();
    let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
    for m in 0..dim {
        for n in 0..dim {
            matrix[m * dim + n] = phases[m] * phases[n].conj() * real[m * dim + n];
        }
    }
    let trace: f64 = (0..dim).map(|n| real[n * dim + n]).sum();
    let deficit = (1.0 - trace).max(0.0);
    if deficit > BUILD_DEFICIT {
        return Err(Error::Truncation { dim, deficit });
    }
    TruncatedState::from_matrix(dim, matrix, deficit)
}

/// Normalized amplified state together with its heralding weight `tr(ĈρĈ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplified {
    pub state: TruncatedState,
    pub success_weight: f64,
}

/// Applies `Ĉ = g^n̂` and keeps the unnormalized trace as importance weight.
pub fn apply_nla_weighted(state: &TruncatedState, gain: f64) -> Result<Amplified> {
    if !(gain >= 1.0) || !gain.is_finite() {
        return Err(domain("NLA gain must be finite and at least 1", gain));
    }
    let dim = state.dim;
    let mut powers = Vec::with_capacity(dim);
    let mut gk = 1.0_f64;
    for _ in 0..dim {
        powers.push(gk);
        gk *= gain;
    }
    let mut matrix = Vec::with_capacity(dim * dim);
    for m in 0..dim {
        for n in 0..dim {
            matrix.push(state.get(m, n) * (powers[m] * powers[n]));
        }
    }
    let weight: f64 = (0..dim).map(|n| matrix[n * dim + n].re).sum();
    if !(weight > 0.0) || !weight.is_finite() {
        return Err(Error::Divergence {
            dim,
            ratio: f64::INFINITY,
        });
    }
    for z in matrix.iter_mut() {
        *z /= weight;
    }

    // geometric extrapolation of the last two populations
    let deficit = if dim >= 2 && gain > 1.0 {
        let last = matrix[(dim - 1) * dim + dim - 1].re.abs();
        let prev = matrix[(dim - 2) * dim + dim - 2].re.abs();
        if last == 0.0 {
            0.0
        } else if prev == 0.0 {
            f64::INFINITY
        } else {
            let ratio = last / prev;
            if ratio >= 1.0 {
                return Err(Error::Divergence { dim, ratio });
            }
            last * ratio / (1.0 - ratio)
        }
    } else {
        state.trace_deficit
    };
    if deficit > AMPLIFIED_DEFICIT {
        return Err(Error::Truncation { dim, deficit });
    }
    Ok(Amplified {
        state: TruncatedState::from_matrix(dim, matrix, deficit)?,
        success_weight: weight,
    })
}

/// `ĈρĈ/tr(ĈρĈ)` with `Ĉ = g^n̂`.
pub fn apply_nla(state: &TruncatedState, gain: f64) -> Result<TruncatedState> {
    apply_nla_weighted(state, gain).map(|a| a.state)
}

/// Quadrature means and variances from `⟨â⟩`, `⟨â²⟩` and `⟨n̂⟩`.
pub fn moments(state: &TruncatedState) -> MomentSummary {
    let dim = state.dim;
    let trace = state.trace();
    let mut a = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut n_mean = 0.0;
    for n in 0..dim {
        let nf = n as f64;
        n_mean += nf * state.get(n, n).re;
        if n >= 1 {
            a += state.get(n, n - 1) * libm::sqrt(nf);
        }
        if n >= 2 {
            a2 += state.get(n, n - 2) * libm::sqrt(nf * (nf - 1.0));
        }
    }
    a /= trace;
    a2 /= trace;
    n_mean /= trace;
    let mean_x = 2.0 * a.re;
    let mean_p = 2.0 * a.im;
    let x2 = 2.0 * a2.re + 2.0 * n_mean + 1.0;
    let p2 = -2.0 * a2.re + 2.0 * n_mean + 1.0;
    MomentSummary {
        mean_x,
        mean_p,
        var_x: x2 - mean_x * mean_x,
        var_p: p2 - mean_p * mean_p,
    }
}

/// Settings for [`verify_equivalent_channel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub dim: usize,
    /// Gauss–Hermite points per quadrature axis.
    pub order: usize,
    /// Ceiling for automatic dimension doubling on truncation failures.
    pub max_dim: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            dim: 40,
            order: 41,
            max_dim: 256,
        }
    }
}

/// Outcome of the equivalent-channel check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport {
    /// Covariance assembled from the x quadratures (`c` from `Cov(x_A, x_B)`).
    pub oracle_x: TwoModeCovariance,
    /// Covariance from the p quadratures, with `c = −Cov(p_A, p_B)`.
    pub oracle_p: TwoModeCovariance,
    /// `build_covariance(ζ, η, ε^g)`.
    pub closed_form: TwoModeCovariance,
    pub max_deviation: f64,
    pub dim_used: usize,
}

struct Node {
    alpha: Complex64,
    weight: f64,
}

fn heterodyne_nodes(lambda: f64, order: usize) -> Result<Vec<Node>> {
    let (t, w) = quadrature::gauss_hermite(order)?;
    // Alice's heterodyne outcome has density ∝ exp(−(1 − λ²)|α|²)
    let scale = 1.0 / libm::sqrt(1.0 - lambda * lambda);
    let mut nodes = Vec::with_capacity(order * order);
    for (ti, wi) in t.iter().zip(&w) {
        for (tj, wj) in t.iter().zip(&w) {
            nodes.push(Node {
                alpha: Complex64::new(ti * scale, tj * scale),
                weight: wi * wj,
            });
        }
    }
    Ok(nodes)
}

#[derive(Default)]
struct Accumulator {
    w: f64,
    rx: f64,
    rp: f64,
    rx2: f64,
    rp2: f64,
    mx: f64,
    mp: f64,
    mx2: f64,
    mp2: f64,
    rxmx: f64,
    rpmp: f64,
    vx: f64,
    vp: f64,
}

fn assemble(protocol: &ProtocolParams, channel: &ChannelParams, dim: usize, order: usize) -> Result<(TwoModeCovariance, TwoModeCovariance)> {
    let lambda = protocol.epr_lambda();
    let gain = protocol.gain();
    let aux = nla_auxiliaries(protocol, channel)?;
    let amp = libm::sqrt(channel.transmittance()) * lambda;

    let mut acc = Accumulator::default();
    for node in heterodyne_nodes(lambda, order)? {
        let beta = node.alpha.conj() * amp;
        let state = make_displaced_thermal(aux.lambda_ch, beta.re, beta.im, dim)?;
        let out = apply_nla_weighted(&state, gain)?;
        let m = moments(&out.state);
        let w = node.weight * out.success_weight;
        let rx = 2.0 * node.alpha.re;
        let rp = 2.0 * node.alpha.im;
        acc.w += w;
        acc.rx += w * rx;
        acc.rp += w * rp;
        acc.rx2 += w * rx * rx;
        acc.rp2 += w * rp * rp;
        acc.mx += w * m.mean_x;
        acc.mp += w * m.mean_p;
        acc.mx2 += w * m.mean_x * m.mean_x;
        acc.mp2 += w * m.mean_p * m.mean_p;
        acc.rxmx += w * rx * m.mean_x;
        acc.rpmp += w * rp * m.mean_p;
        acc.vx += w * m.var_x;
        acc.vp += w * m.var_p;
    }
    let e = |s: f64| s / acc.w;
    let (erx, erp, emx, emp) = (e(acc.rx), e(acc.rp), e(acc.mx), e(acc.mp));
    // heterodyne outcomes carry one extra unit of vacuum noise
    let x = TwoModeCovariance {
        a: e(acc.rx2) - erx * erx - 1.0,
        b: e(acc.vx) + e(acc.mx2) - emx * emx,
        c: e(acc.rxmx) - erx * emx,
    };
    let p = TwoModeCovariance {
        a: e(acc.rp2) - erp * erp - 1.0,
        b: e(acc.vp) + e(acc.mp2) - emp * emp,
        c: -(e(acc.rpmp) - erp * emp),
    };
    Ok((x, p))
}

/// Rebuilds the post-selected Alice–Bob covariance matrix by brute force and
/// compares it with the closed-form effective parameters.
///
/// Truncation or divergence at `opts.dim` triggers dimension doubling up to
/// `opts.max_dim`.
pub fn verify_equivalent_channel(
    protocol: &ProtocolParams,
    channel: &ChannelParams,
    opts: &OracleOptions,
) -> Result<EquivalenceReport> {
    let eff = effective_params(protocol, channel)?;
    if !eff.feasible {
        return Err(Error::Infeasible(eff.binding_constraint));
    }
    let closed_form = covariance_raw(eff.zeta, eff.eta, eff.eps_g);

    let mut dim = opts.dim.max(2);
    let (oracle_x, oracle_p) = loop {
        match assemble(protocol, channel, dim, opts.order) {
            Ok(pair) => break pair,
            Err(Error::Truncation { .. } | Error::Divergence { .. }) if dim * 2 <= opts.max_dim => dim *= 2,
            Err(e) => return Err(e),
        }
    };

    let mut max_deviation = 0.0_f64;
    for o in [&oracle_x, &oracle_p] {
        max_deviation = max_deviation
            .max((o.a - closed_form.a).abs())
            .max((o.b - closed_form.b).abs())
            .max((o.c - closed_form.c).abs());
    }
    Ok(EquivalenceReport {
        oracle_x,
        oracle_p,
        closed_form,
        max_deviation,
        dim_used: dim,
    })
}

/// Bob's state averaged over Alice's heterodyne outcomes, optionally amplified.
///
/// Without amplification this is the thermal state of parameter `λ*`; after
/// a successful amplification it is thermal with parameter `g·λ*`.
pub fn bob_unconditional_state(
    protocol: &ProtocolParams,
    channel: &ChannelParams,
    dim: usize,
    order: usize,
    amplify: bool,
) -> Result<TruncatedState> {
    let lambda = protocol.epr_lambda();
    let aux = nla_auxiliaries(protocol, channel)?;
    let amp = libm::sqrt(channel.transmittance()) * lambda;
    let mut sum = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut total = 0.0;
    for node in heterodyne_nodes(lambda, order)? {
        let beta = node.alpha.conj() * amp;
        let state = make_displaced_thermal(aux.lambda_ch, beta.re, beta.im, dim)?;
        let (state, w) = if amplify {
            let out = apply_nla_weighted(&state, protocol.gain())?;
            (out.state, node.weight * out.success_weight)
        } else {
            (state, node.weight)
        };
        for (s, z) in sum.iter_mut().zip(state.matrix()) {
            *s += z * w;
        }
        total += w;
    }
    for s in sum.iter_mut() {
        *s /= total;
    }
    let trace: f64 = (0..dim).map(|n| sum[n * dim + n].re).sum();
    TruncatedState::from_matrix(dim, sum, (1.0 - trace).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{thermal_variance, PsucModel};

    fn proto(lambda: f64, gain: f64) -> ProtocolParams {
        ProtocolParams::new(lambda, 1.0, gain, PsucModel::UpperBound).unwrap()
    }

    #[test]
    fn vacuum_projector() {
        let s = TruncatedState::vacuum(10).unwrap();
        assert!((s.get(0, 0).re - 1.0).abs() < 1e-15);
        assert!(s.matrix().iter().skip(1).all(|z| z.norm() < 1e-15));
        let m = moments(&s);
        assert_eq!((m.mean_x, m.mean_p), (0.0, 0.0));
        assert!((m.var_x - 1.0).abs() < 1e-15 && (m.var_p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn thermal_populations_and_variance() {
        let l: f64 = 0.3;
        let s = TruncatedState::thermal(l, 40).unwrap();
        for (n, p) in s.populations().iter().enumerate() {
            let expected = (1.0 - l * l) * libm::pow(l * l, n as f64);
            assert!((p - expected).abs() < 1e-15);
        }
        let m = moments(&s);
        assert!((m.var_x - 1.09 / 0.91).abs() < 1e-12);
        assert!((m.var_p - 1.19780).abs() < 1e-5);
    }

    #[test]
    fn displaced_thermal_mean() {
        let s = make_displaced_thermal(0.2, 0.5, 0.0, 40).unwrap();
        let m = moments(&s);
        assert!((m.mean_x - 1.0).abs() < 1e-12);
        assert!(m.mean_p.abs() < 1e-12);
        let v = thermal_variance(0.2);
        assert!((m.var_x - v).abs() < 1e-12 && (m.var_p - v).abs() < 1e-12);

        let s = make_displaced_thermal(0.1, -0.3, 0.7, 40).unwrap();
        let m = moments(&s);
        assert!((m.mean_x + 0.6).abs() < 1e-12 && (m.mean_p - 1.4).abs() < 1e-12);
    }

    #[test]
    fn coherent_state_matches_amplitudes() {
        let alpha = Complex64::new(0.4, -0.2);
        let s = TruncatedState::coherent(alpha, 30).unwrap();
        let amps = coherent_amplitudes(alpha, 30);
        assert!((s.overlap_with_pure(&amps) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn truncation_is_detected() {
        let err = make_displaced_thermal(0.9, 0.0, 0.0, 10).unwrap_err();
        assert!(matches!(err, Error::Truncation { dim: 10, .. }));
    }

    #[test]
    fn nla_amplifies_coherent_state() {
        let s = TruncatedState::coherent(Complex64::new(0.3, 0.0), 40).unwrap();
        let out = apply_nla(&s, 2.0).unwrap();
        let target = coherent_amplitudes(Complex64::new(0.6, 0.0), 40);
        assert!(out.overlap_with_pure(&target) > 1.0 - 1e-9);
    }

    #[test]
    fn nla_success_weight_matches_coherent_norm() {
        // ‖g^n̂|α⟩‖² = exp(|α|²(g² − 1))
        let alpha = Complex64::new(0.2, 0.25);
        let s = TruncatedState::coherent(alpha, 40).unwrap();
        let out = apply_nla_weighted(&s, 1.7).unwrap();
        let expected = libm::exp(alpha.norm_sqr() * (1.7 * 1.7 - 1.0));
        assert!((out.success_weight - expected).abs() < 1e-13);
    }

    #[test]
    fn unit_gain_leaves_state_unchanged() {
        let s = make_displaced_thermal(0.25, 0.3, -0.1, 30).unwrap();
        let out = apply_nla(&s, 1.0).unwrap();
        assert!(out.max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn nla_maps_displaced_thermal_to_displaced_thermal() {
        let (lch, beta, g) = (0.2, 0.5, 2.0);
        let s = make_displaced_thermal(lch, beta, 0.0, 80).unwrap();
        let out = apply_nla(&s, g).unwrap();
        let g_tilde = g * (1.0 - lch * lch) / (1.0 - g * g * lch * lch);
        let expected = make_displaced_thermal(g * lch, g_tilde * beta, 0.0, 80).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-12);
        let m = moments(&out);
        assert!((m.var_x - 1.16 / 0.84).abs() < 1e-10);
        assert!((m.mean_x - 2.0 * 2.285_714_285_714_286 * 0.5).abs() < 1e-10);
    }

    #[test]
    fn diverging_amplification_is_rejected() {
        let s = TruncatedState::thermal(0.6, 60).unwrap();
        assert!(matches!(apply_nla(&s, 2.0), Err(Error::Divergence { .. })));
    }

    #[test]
    fn amplified_state_is_hermitian_and_normalized() {
        let s = make_displaced_thermal(0.15, 0.4, 0.3, 50).unwrap();
        let out = apply_nla(&s, 1.8).unwrap();
        assert!(out.hermiticity_error() < 1e-12);
        assert!((out.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equivalent_channel_at_unit_gain() {
        let ch = ChannelParams::new(0.2, 0.1).unwrap();
        let opts = OracleOptions { dim: 40, order: 21, max_dim: 40 };
        let rep = verify_equivalent_channel(&proto(0.4, 1.0), &ch, &opts).unwrap();
        assert!(rep.max_deviation < 1e-8, "{}", rep.max_deviation);
    }

    #[test]
    fn equivalent_channel_noiseless_reduction() {
        let ch = ChannelParams::new(0.1, 0.0).unwrap();
        let opts = OracleOptions { dim: 40, order: 31, max_dim: 80 };
        let (l, g) = (0.3, 2.0);
        let rep = verify_equivalent_channel(&proto(l, g), &ch, &opts).unwrap();
        assert!(rep.max_deviation < 1e-8, "{}", rep.max_deviation);
        let k = 1.0 + (g * g - 1.0) * 0.1;
        let closed = covariance_raw(l * libm::sqrt(k), g * g * 0.1 / k, 0.0);
        assert!((rep.closed_form.a - closed.a).abs() < 1e-14);
        assert!((rep.oracle_x.b - closed.b).abs() < 1e-8);
    }

    #[test]
    fn unconditional_state_is_thermal_lambda_star() {
        let p = proto(0.3, 1.5);
        let ch = ChannelParams::new(0.1, 0.05).unwrap();
        let aux = nla_auxiliaries(&p, &ch).unwrap();
        let before = bob_unconditional_state(&p, &ch, 60, 41, false).unwrap();
        let th = TruncatedState::thermal(aux.lambda_star, 60).unwrap();
        assert!(before.max_abs_diff(&th) < 1e-6);
        let after = bob_unconditional_state(&p, &ch, 60, 41, true).unwrap();
        let th = TruncatedState::thermal(1.5 * aux.lambda_star, 60).unwrap();
        assert!(after.max_abs_diff(&th) < 1e-6);
    }
}
