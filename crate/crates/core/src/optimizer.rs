//! Optimized key rates and the zero-crossing searches built on them.
//!
//! Alice is free to pick her modulation, so every figure quantity is the key
//! rate maximized over the EPR parameter. With an amplifier the search runs
//! over the effective parameter `ζ ∈ (0, 1)`, whose box does not depend on
//! the channel. Sign decisions always use the rate per heralded event, so
//! loss and noise limits are identical for every success-probability model.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gaussian::{key_rate_raw, ChannelParams, PsucModel};
use crate::nla::{channel_constraint, effective_params_raw, g_max_raw, lambda_limit_raw, BindingConstraint};
use crate::search::{bisect_boundary, golden_section_max, linspace};

/// Which parameter the key rate is maximized over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptVariable {
    /// The physical EPR parameter, `λ ∈ (0, λ_limit)`.
    Lambda,
    /// The effective EPR parameter, `ζ ∈ (0, 1)`.
    Zeta,
}

impl OptVariable {
    /// `λ` without amplification, `ζ` with it.
    pub fn default_for(gain: f64) -> Self {
        if gain > 1.0 {
            OptVariable::Zeta
        } else {
            OptVariable::Lambda
        }
    }
}

/// Tolerances and ranges shared by the searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub scan_points: usize,
    pub arg_tol: f64,
    pub max_iter: usize,
    /// Distance kept from the open ends of the `λ`/`ζ` box, relative to its width.
    pub box_margin: f64,
    pub max_loss_db: f64,
    pub loss_scan_step_db: f64,
    pub loss_tol_db: f64,
    pub noise_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            scan_points: 64,
            arg_tol: 1e-8,
            max_iter: 200,
            box_margin: 1e-9,
            max_loss_db: 60.0,
            loss_scan_step_db: 0.5,
            loss_tol_db: 1e-9,
            noise_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationReport {
    pub variable: OptVariable,
    /// Optimal `λ` or `ζ`, depending on `variable`.
    pub argmax: f64,
    /// The physical EPR parameter at the optimum.
    pub epr_lambda: f64,
    /// Maximized key rate including the success probability.
    pub max_value: f64,
    /// Maximized rate per heralded event.
    pub postselected_value: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub bracket: (f64, f64),
    /// The optimum sits on the edge of the search box (e.g. `λ → 1` at `β = 1`).
    pub boundary: bool,
    /// The coarse scan saw more than one local maximum.
    pub multimodal: bool,
}

/// Maximizes the key rate over `λ` or `ζ` with default options.
pub fn optimize_key_rate(
    channel: &ChannelParams,
    recon_beta: f64,
    gain: f64,
    variable: OptVariable,
    psuc: PsucModel,
) -> Result<OptimizationReport> {
    optimize_key_rate_with(channel, recon_beta, gain, variable, psuc, &SearchOptions::default())
}

pub fn optimize_key_rate_with(
    channel: &ChannelParams,
    recon_beta: f64,
    gain: f64,
    variable: OptVariable,
    psuc: PsucModel,
    opts: &SearchOptions,
) -> Result<OptimizationReport> {
    // validates β, g and the probability model
    let probe = crate::gaussian::ProtocolParams::new(0.0, recon_beta, gain, psuc)?;
    let t = channel.transmittance();
    let eps = channel.excess_noise();

    let binding = channel_constraint(t, eps, gain);
    if binding != BindingConstraint::None {
        return Err(Error::Infeasible(binding));
    }
    let lambda_max = lambda_limit_raw(t, eps, gain);
    if !(lambda_max > 0.0) {
        return Err(Error::Infeasible(BindingConstraint::ZetaGeOne));
    }

    // η and ε^g do not depend on λ; ζ = λ/λ_max.
    let eff = effective_params_raw(0.0, t, eps, gain)?;
    let upper = match variable {
        OptVariable::Lambda => lambda_max,
        OptVariable::Zeta => 1.0,
    };
    let to_zeta = |x: f64| match variable {
        OptVariable::Lambda => x / lambda_max,
        OptVariable::Zeta => x,
    };
    let objective = |x: f64| {
        let zeta = to_zeta(x);
        if !(0.0..1.0).contains(&zeta) {
            return f64::NEG_INFINITY;
        }
        match key_rate_raw(zeta, eff.eta, eff.eps_g, recon_beta, 1.0) {
            Ok(r) => r.key_rate,
            Err(_) => f64::NEG_INFINITY,
        }
    };

    let lo = opts.box_margin.max(1e-6) * upper;
    let hi = upper * (1.0 - opts.box_margin);
    let n = opts.scan_points.max(3);
    let grid: Vec<f64> = linspace(lo, hi, n).collect();
    let values: Vec<f64> = grid.iter().map(|&x| objective(x)).collect();

    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    if values[best] == f64::NEG_INFINITY {
        return Err(Error::Infeasible(BindingConstraint::ZetaGeOne));
    }
    let local_maxima = (0..n)
        .filter(|&i| {
            let left = i == 0 || values[i] > values[i - 1];
            let right = i + 1 == n || values[i] > values[i + 1];
            left && right
        })
        .count();

    let bracket = (grid[best.saturating_sub(1)], grid[(best + 1).min(n - 1)]);
    let m = golden_section_max(objective, bracket.0, bracket.1, opts.arg_tol, opts.max_iter);
    let edge = 10.0 * opts.arg_tol;
    let boundary = (m.x - lo).abs() <= edge || (hi - m.x).abs() <= edge;
    let p = probe.success_probability();

    Ok(OptimizationReport {
        variable,
        argmax: m.x,
        epr_lambda: to_zeta(m.x) * lambda_max,
        max_value: p * m.fx,
        postselected_value: m.fx,
        evaluations: n + m.evaluations,
        converged: m.converged,
        bracket,
        boundary,
        multimodal: local_maxima > 1,
    })
}

/// Positive optimized rate; infeasible parameters count as "not positive".
fn positive_rate(channel: Result<ChannelParams>, beta: f64, gain: f64, opts: &SearchOptions) -> Result<bool> {
    let channel = channel?;
    // P_suc does not change the sign; fix it so results cannot depend on it.
    match optimize_key_rate_with(
        &channel,
        beta,
        gain,
        OptVariable::default_for(gain),
        PsucModel::UpperBound,
        opts,
    ) {
        Ok(r) => Ok(r.postselected_value > 0.0),
        Err(Error::Infeasible(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Losses in dB at which the optimized key rate crosses zero.
pub fn find_loss_limit(excess_noise: f64, recon_beta: f64, gain: f64, psuc: PsucModel) -> Result<f64> {
    find_loss_limit_with(excess_noise, recon_beta, gain, psuc, &SearchOptions::default())
}

/// Scans the losses upward for the last positive point, then bisects the
/// positive-to-negative transition.
pub fn find_loss_limit_with(
    excess_noise: f64,
    recon_beta: f64,
    gain: f64,
    psuc: PsucModel,
    opts: &SearchOptions,
) -> Result<f64> {
    crate::gaussian::ProtocolParams::new(0.0, recon_beta, gain, psuc)?;
    let sign = |db: f64| positive_rate(ChannelParams::from_loss_db(db, excess_noise), recon_beta, gain, opts);

    let steps = libm::ceil(opts.max_loss_db / opts.loss_scan_step_db) as usize;
    let mut last_positive = None;
    for i in 0..=steps {
        let db = (i as f64 * opts.loss_scan_step_db).min(opts.max_loss_db);
        if sign(db)? {
            last_positive = Some(db);
        }
    }
    let inside = last_positive.ok_or(Error::NotPositive)?;
    if inside >= opts.max_loss_db {
        return Err(Error::NoCrossing {
            max_db: opts.max_loss_db,
        });
    }
    let outside = (inside + opts.loss_scan_step_db).min(opts.max_loss_db);

    let mut failure = None;
    let (a, b) = bisect_boundary(
        |db| match sign(db) {
            Ok(s) => s,
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        },
        inside,
        outside,
        opts.loss_tol_db,
        opts.max_iter,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(0.5 * (a + b))
}

/// Largest excess noise keeping the optimized key rate positive at the given losses.
pub fn max_excess_noise(losses_db: f64, recon_beta: f64, gain: f64, psuc: PsucModel) -> Result<f64> {
    max_excess_noise_with(losses_db, recon_beta, gain, psuc, &SearchOptions::default())
}

pub fn max_excess_noise_with(
    losses_db: f64,
    recon_beta: f64,
    gain: f64,
    psuc: PsucModel,
    opts: &SearchOptions,
) -> Result<f64> {
    crate::gaussian::ProtocolParams::new(0.0, recon_beta, gain, psuc)?;
    let sign = |eps: f64| positive_rate(ChannelParams::from_loss_db(losses_db, eps), recon_beta, gain, opts);

    if !sign(0.0)? {
        return Err(Error::NotPositive);
    }
    let top = 2.0 * (1.0 - 1e-12);
    if sign(top)? {
        return Ok(top);
    }
    let mut failure = None;
    let (inside, _) = bisect_boundary(
        |eps| match sign(eps) {
            Ok(s) => s,
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        },
        0.0,
        top,
        opts.noise_tol,
        opts.max_iter,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(inside)
}

/// One point of a gain scan.
#[derive(Debug, Clone, PartialEq)]
pub struct GainScanPoint {
    pub gain: f64,
    /// `Err(Infeasible(..))` for gains at or beyond `g_max`.
    pub outcome: Result<OptimizationReport>,
}

/// Optimized amplified key rate for each gain on the grid.
pub fn gain_scan(
    losses_db: f64,
    excess_noise: f64,
    recon_beta: f64,
    gain_grid: &[f64],
    psuc: PsucModel,
) -> Result<Vec<GainScanPoint>> {
    let channel = ChannelParams::from_loss_db(losses_db, excess_noise)?;
    Ok(gain_grid
        .iter()
        .map(|&gain| GainScanPoint {
            gain,
            outcome: optimize_key_rate(&channel, recon_beta, gain, OptVariable::default_for(gain), psuc),
        })
        .collect())
}

/// Gain in `[1, g_max)` that maximizes the optimized amplified key rate.
pub fn optimal_gain(channel: &ChannelParams, recon_beta: f64, psuc: PsucModel) -> Result<(f64, OptimizationReport)> {
    let opts = SearchOptions::default();
    let g_hi = g_max_raw(channel.transmittance(), channel.excess_noise());
    if !g_hi.is_finite() {
        return Err(Error::Domain {
            what: "optimal gain is unbounded without excess noise",
            value: channel.excess_noise(),
        });
    }
    let g_hi = 1.0 + (g_hi - 1.0) * (1.0 - 1e-9);
    let rate = |g: f64| {
        optimize_key_rate_with(channel, recon_beta, g, OptVariable::default_for(g), psuc, &opts)
            .map(|r| r.max_value)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let grid: Vec<f64> = linspace(1.0, g_hi, opts.scan_points).collect();
    let values: Vec<f64> = grid.iter().map(|&g| rate(g)).collect();
    let best = (0..grid.len())
        .fold(0, |b, i| if values[i] > values[b] { i } else { b });
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let m = golden_section_max(rate, lo, hi, 1e-6 * (1.0 + hi), opts.max_iter);
    let report = optimize_key_rate_with(channel, recon_beta, m.x, OptVariable::default_for(m.x), psuc, &opts)?;
    Ok((m.x, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::lambda_opt;

    #[test]
    fn lossless_noiseless_optimum_is_on_the_boundary() {
        let ch = ChannelParams::new(1.0, 0.0).unwrap();
        let r = optimize_key_rate(&ch, 1.0, 1.0, OptVariable::Lambda, PsucModel::UpperBound).unwrap();
        assert!(r.boundary);
        assert!(r.argmax > 0.999);
    }

    #[test]
    fn strong_loss_optimum_approaches_lambda_opt() {
        let target = lambda_opt(0.95).unwrap();
        let ch = ChannelParams::from_loss_db(40.0, 0.05 * 1e-3).unwrap();
        let r = optimize_key_rate(&ch, 0.95, 1.0, OptVariable::Lambda, PsucModel::UpperBound).unwrap();
        assert!(r.converged);
        assert!((r.argmax - target).abs() < 2e-3, "{} vs {target}", r.argmax);
    }

    #[test]
    fn fig5_unit_gain_is_negative() {
        let ch = ChannelParams::from_loss_db(30.0, 0.1).unwrap();
        let r = optimize_key_rate(&ch, 1.0, 1.0, OptVariable::Lambda, PsucModel::UpperBound).unwrap();
        assert!(r.max_value < 0.0);
    }

    #[test]
    fn report_dominates_bracket_endpoints() {
        let ch = ChannelParams::from_loss_db(20.0, 0.05).unwrap();
        let r = optimize_key_rate(&ch, 0.95, 1.0, OptVariable::Lambda, PsucModel::UpperBound).unwrap();
        let at = |l: f64| key_rate_raw(l, ch.transmittance(), 0.05, 0.95, 1.0).unwrap().key_rate;
        assert!(r.converged);
        assert!(r.max_value >= at(r.bracket.0) && r.max_value >= at(r.bracket.1));
    }

    #[test]
    fn lambda_and_zeta_agree() {
        let ch = ChannelParams::from_loss_db(35.0, 0.05).unwrap();
        let a = optimize_key_rate(&ch, 0.95, 3.0, OptVariable::Lambda, PsucModel::UpperBound).unwrap();
        let b = optimize_key_rate(&ch, 0.95, 3.0, OptVariable::Zeta, PsucModel::UpperBound).unwrap();
        assert!((a.max_value - b.max_value).abs() < 1e-12);
        assert!((a.epr_lambda - b.epr_lambda).abs() < 1e-6);
    }

    #[test]
    fn infeasible_gain_is_reported() {
        let ch = ChannelParams::from_loss_db(10.0, 0.2).unwrap();
        let err = optimize_key_rate(&ch, 0.95, 10.0, OptVariable::Zeta, PsucModel::UpperBound).unwrap_err();
        assert_eq!(err, Error::Infeasible(BindingConstraint::EtaGtOne));
    }

    #[test]
    fn no_crossing_without_excess_noise() {
        let err = find_loss_limit(0.0, 0.95, 1.0, PsucModel::UpperBound).unwrap_err();
        assert!(matches!(err, Error::NoCrossing { .. }));
    }

    #[test]
    fn loss_limit_near_28_db() {
        let db = find_loss_limit(0.05, 0.95, 1.0, PsucModel::UpperBound).unwrap();
        assert!((db - 28.0).abs() < 0.5, "{db}");
        let ch = ChannelParams::from_loss_db(db, 0.05).unwrap();
        let r = optimize_key_rate(&ch, 0.95, 1.0, OptVariable::Lambda, PsucModel::UpperBound).unwrap();
        assert!(r.max_value.abs() < 1e-8);
    }

    #[test]
    fn excess_noise_limit_grows_with_gain() {
        let e1 = max_excess_noise(35.0, 0.95, 1.0, PsucModel::UpperBound).unwrap();
        let e4 = max_excess_noise(35.0, 0.95, 4.0, PsucModel::UpperBound).unwrap();
        assert!(e4 > e1, "{e4} <= {e1}");
    }

    #[test]
    fn gain_scan_marks_infeasible_points() {
        let pts = gain_scan(30.0, 0.1, 1.0, &[1.0, 2.0, 1e3], PsucModel::UpperBound).unwrap();
        assert!(pts[0].outcome.is_ok());
        assert!(pts[1].outcome.is_ok());
        assert!(matches!(pts[2].outcome, Err(Error::Infeasible(_))));
    }
}
