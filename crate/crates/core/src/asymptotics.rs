//! Strong-loss behaviour of the key rate.
//!
//! To first order in `T` the amplified key rate is
//!
//! ```text
//! ΔI ≃ P·g²T · [ −2βλ²(λ²−1) − ε(λ²−1)²(1 + ln 2)
//!               + (λ²−1)(ε(λ²−1)(ln ε + ln g²T) + 4λ² ln λ) + 2λ² ln λ² ]
//!       / (2(λ²−1)² ln 2)
//! ```
//!
//! so the amplifier acts as `T → g²T` and the zero crossing moves by `1/g²`.

use crate::error::{domain, Error, Result};
use crate::gaussian::{ChannelParams, ProtocolParams};
use crate::search::bisect_root;

/// First-order strong-loss key rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionResult {
    /// Bits per channel use, including the success-probability factor.
    pub key_rate_first_order: f64,
    /// Effective transmittance `g²T`; the expansion is trusted when this is small.
    pub validity_hint: f64,
}

/// First-order expansion of the (amplified) key rate in `T`.
pub fn key_rate_expansion(protocol: &ProtocolParams, channel: &ChannelParams) -> Result<ExpansionResult> {
    let lambda = protocol.epr_lambda();
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(domain("expansion needs 0 < λ < 1", lambda));
    }
    let gain = protocol.gain();
    let t_eff = gain * gain * channel.transmittance();
    let rate = protocol.success_probability()
        * first_order_rate(lambda, t_eff, channel.excess_noise(), protocol.recon_beta());
    Ok(ExpansionResult {
        key_rate_first_order: rate,
        validity_hint: t_eff,
    })
}

/// `T·[…]/(2(λ²−1)² ln 2)` evaluated at transmittance `t`, without `P_suc`.
fn first_order_rate(lambda: f64, t: f64, eps: f64, beta: f64) -> f64 {
    let ln = libm::log;
    let ln2 = core::f64::consts::LN_2;
    let l2 = lambda * lambda;
    let m = l2 - 1.0;
    // ε(ln ε + ln T) → 0 as ε → 0
    let noise_log = if eps > 0.0 { eps * (ln(eps) + ln(t)) } else { 0.0 };
    let bracket = -2.0 * beta * l2 * m - eps * m * m * (1.0 + ln2)
        + m * (m * noise_log + 4.0 * l2 * ln(lambda))
        + 2.0 * l2 * ln(l2);
    t * bracket / (2.0 * m * m * ln2)
}

/// Closed-form loss limit `T_lim` without amplification.
///
/// Returns 0 when `ε = 0`: the first-order rate never crosses zero.
pub fn t_lim(epr_lambda: f64, excess_noise: f64, recon_beta: f64) -> Result<f64> {
    if !(epr_lambda > 0.0 && epr_lambda < 1.0) {
        return Err(domain("T_lim needs 0 < λ < 1", epr_lambda));
    }
    if !(excess_noise >= 0.0) {
        return Err(domain("excess noise must be non-negative", excess_noise));
    }
    if !(recon_beta > 0.0 && recon_beta <= 1.0) {
        return Err(domain("reconciliation efficiency must lie in (0, 1]", recon_beta));
    }
    if excess_noise == 0.0 {
        return Ok(0.0);
    }
    let (l, e, b) = (epr_lambda, excess_noise, recon_beta);
    let l2 = l * l;
    let m = l2 - 1.0;
    // (2/ε)·λ^(−4λ⁴/(ε(λ²−1)²))·exp((λ²(2β+ε) − ε)/(ε(λ²−1))), in log space
    let log_t = libm::log(2.0 / e) - 4.0 * l2 * l2 / (e * m * m) * libm::log(l)
        + (l2 * (2.0 * b + e) - e) / (e * m);
    Ok(libm::exp(log_t))
}

/// Loss limit with an amplifier of gain `g`: `T_lim/g²`.
pub fn t_lim_with_gain(epr_lambda: f64, excess_noise: f64, recon_beta: f64, gain: f64) -> Result<f64> {
    if !(gain >= 1.0) {
        return Err(domain("NLA gain must be at least 1", gain));
    }
    Ok(t_lim(epr_lambda, excess_noise, recon_beta)? / (gain * gain))
}

/// Extra tolerable losses `20·log₁₀(g)` dB bought by an amplifier of gain `g`.
pub fn loss_gain_db(gain: f64) -> f64 {
    20.0 * libm::log10(gain)
}

/// Left-hand side of the optimality condition, `λ²(λ² − 4 ln λ − 1)/(1 − λ²)`.
pub fn lambda_opt_condition(lambda: f64) -> f64 {
    let l2 = lambda * lambda;
    l2 * (l2 - 4.0 * libm::log(lambda) - 1.0) / (1.0 - l2)
}

const LAMBDA_SCAN: (f64, f64, usize) = (0.01, 0.999, 200);

/// EPR parameter that maximizes the first-order key rate (and minimizes `T_lim`).
///
/// Depends only on `β`. A coarse scan over `[0.01, 0.999]` brackets the root,
/// which bisection then refines to `1e-10`.
pub fn lambda_opt(recon_beta: f64) -> Result<f64> {
    if !(recon_beta > 0.0 && recon_beta <= 1.0) {
        return Err(domain("reconciliation efficiency must lie in (0, 1]", recon_beta));
    }
    let f = |l: f64| lambda_opt_condition(l) - recon_beta;
    let (lo, hi, n) = LAMBDA_SCAN;
    let step = (hi - lo) / (n - 1) as f64;
    let mut prev = (lo, f(lo));
    for i in 1..n {
        let x = if i + 1 == n { hi } else { lo + step * i as f64 };
        let fx = f(x);
        if prev.1.signum() != fx.signum() {
            return bisect_root(f, prev.0, x, 1e-10, 200);
        }
        prev = (x, fx);
    }
    Err(Error::NoBracket {
        what: "optimal EPR parameter",
        lo,
        hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::PsucModel;

    fn proto(lambda: f64, beta: f64, gain: f64) -> ProtocolParams {
        ProtocolParams::new(lambda, beta, gain, PsucModel::UpperBound).unwrap()
    }

    #[test]
    fn noiseless_expansion_reduces_to_simple_form() {
        let (l, b, t) = (0.7_f64, 0.93, 1e-3);
        let l2 = l * l;
        let ln2 = core::f64::consts::LN_2;
        let ln_l = libm::log(l);
        let simple = t * l2 * ((1.0 - l2) * (b - 2.0 * ln_l) + 2.0 * ln_l) / ((l2 - 1.0) * (l2 - 1.0) * ln2);
        let ch = ChannelParams::new(t, 0.0).unwrap();
        for &g in &[1.0, 2.0, 5.0] {
            let e = key_rate_expansion(&proto(l, b, g), &ch).unwrap();
            assert!((e.key_rate_first_order - simple).abs() < 1e-15, "g = {g}");
        }
    }

    #[test]
    fn expansion_rejects_boundary_lambda() {
        let ch = ChannelParams::new(1e-3, 0.05).unwrap();
        let p = ProtocolParams::without_nla(0.0, 0.95).unwrap();
        assert!(key_rate_expansion(&p, &ch).is_err());
    }

    #[test]
    fn t_lim_reference() {
        let t = t_lim(0.806, 0.05, 0.95).unwrap();
        assert!((t - 1.6e-3).abs() < 0.05e-3, "{t}");
        assert_eq!(t_lim(0.806, 0.0, 0.95).unwrap(), 0.0);
        assert!(t_lim(0.806, 1e-3, 0.95).unwrap() < t);
    }

    #[test]
    fn t_lim_gain_scaling() {
        let base = t_lim(0.8, 0.05, 0.95).unwrap();
        let amplified = t_lim_with_gain(0.8, 0.05, 0.95, 2.0).unwrap();
        assert!((amplified - base / 4.0).abs() < 1e-18);
    }

    #[test]
    fn t_lim_is_the_zero_of_the_expansion() {
        let (l, e, b) = (0.75, 0.08, 0.9);
        let t = t_lim(l, e, b).unwrap();
        assert!(first_order_rate(l, t, e, b).abs() < 1e-15);
    }

    #[test]
    fn loss_gain_values() {
        assert_eq!(loss_gain_db(1.0), 0.0);
        assert!((loss_gain_db(2.0) - 6.0206).abs() < 1e-4);
        assert!((loss_gain_db(4.0) - 12.0412).abs() < 1e-4);
    }

    #[test]
    fn lambda_opt_reference() {
        let l = lambda_opt(0.95).unwrap();
        assert!((l - 0.806).abs() < 1e-3);
        assert!((lambda_opt_condition(l) - 0.95).abs() < 1e-9);
    }

    #[test]
    fn lambda_opt_approaches_one() {
        let a = lambda_opt(0.99).unwrap();
        let b = lambda_opt(0.9999).unwrap();
        assert!(b > a && b > 0.98);
        assert!(lambda_opt(1.0).is_err());
    }
}
