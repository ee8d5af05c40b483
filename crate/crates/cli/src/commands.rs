use rayon::prelude::*;

use cvqkd_nla::asymptotics::{lambda_opt, t_lim_with_gain};
use cvqkd_nla::fock::{verify_equivalent_channel, OracleOptions};
use cvqkd_nla::gaussian::{db_to_transmittance, transmittance_to_db};
use cvqkd_nla::nla::{effective_params, g_max, key_rate_nla};
use cvqkd_nla::optimizer::{
    find_loss_limit_with, max_excess_noise, optimize_key_rate, OptVariable, OptimizationReport, SearchOptions,
};
use cvqkd_nla::{ChannelParams, Error, ProtocolParams, PsucModel};

use crate::cli::{ContourNoiseArgs, GainScanArgs, LambdaOptArgs, OracleArgs, PointArgs, SweepLossesArgs, TlimArgs};
use crate::config::Config;
use crate::error::CliError;
use crate::format::number;
use crate::grid::Range;

/// A finished CSV table and its one-line summary.
#[derive(Debug)]
pub struct Report {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
    pub summary: String,
    /// Raised after the table is written (the row itself explains the failure).
    pub failure: Option<CliError>,
}

impl Report {
    fn new(header: &'static [&'static str], rows: Vec<Vec<String>>, summary: String) -> Self {
        Self {
            header,
            rows,
            summary,
            failure: None,
        }
    }
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::Usage(format!("missing --{name} (flag or config key `{name}`)")))
}

fn range(flag: Option<String>, file: &Option<String>, default: Option<&str>) -> Result<Range, CliError> {
    let text = flag
        .or_else(|| file.clone())
        .or_else(|| default.map(str::to_owned))
        .ok_or_else(|| CliError::Usage("missing --range (flag or config key `range`)".into()))?;
    text.parse().map_err(CliError::Usage)
}

fn psuc(flag: Option<String>, cfg: &Config) -> Result<PsucModel, CliError> {
    let text = match flag {
        Some(s) => s,
        None => match cfg.psuc_text()? {
            Some(s) => s,
            None => return Ok(PsucModel::UpperBound),
        },
    };
    match text.trim() {
        "upper" | "upper-bound" => Ok(PsucModel::UpperBound),
        other => other
            .parse::<f64>()
            .map(PsucModel::Constant)
            .map_err(|_| CliError::Usage(format!("--psuc must be `upper` or a probability, got `{other}`"))),
    }
}

/// Optimized rate, or NaN where no admissible modulation exists.
fn optimized(channel: &ChannelParams, beta: f64, gain: f64, psuc: PsucModel) -> Result<Option<OptimizationReport>, Error> {
    match optimize_key_rate(channel, beta, gain, OptVariable::default_for(gain), psuc) {
        Ok(r) => Ok(Some(r)),
        Err(Error::Infeasible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn crossing_text(result: &Result<f64, Error>) -> String {
    match result {
        Ok(db) => format!("{} dB", number(*db)),
        Err(Error::NoCrossing { max_db }) => format!("beyond {} dB", number(*max_db)),
        Err(Error::NotPositive) => "none (never positive)".into(),
        Err(e) => format!("unavailable ({e})"),
    }
}

pub fn keyrate(args: PointArgs, cfg: &Config) -> Result<Report, CliError> {
    let lambda = required(args.lambda, cfg.lambda, "lambda")?;
    let t = required(args.t, cfg.t, "T")?;
    let eps = required(args.epsilon, cfg.epsilon, "epsilon")?;
    let beta = required(args.beta, cfg.beta, "beta")?;
    let gain = args.gain.or(cfg.gain).unwrap_or(1.0);
    let protocol = ProtocolParams::new(lambda, beta, gain, psuc(args.psuc, cfg)?)?;
    let channel = ChannelParams::new(t, eps)?;
    let r = key_rate_nla(&protocol, &channel)?;
    let row = [lambda, t, eps, beta, gain, r.success_probability, r.mutual_info, r.holevo, r.key_rate]
        .map(number)
        .to_vec();
    Ok(Report::new(
        &["lambda", "T", "epsilon", "beta", "gain", "success_probability", "mutual_info", "holevo", "key_rate"],
        vec![row],
        format!("key rate {} bits per channel use", number(r.key_rate)),
    ))
}

pub fn effective(args: PointArgs, cfg: &Config) -> Result<Report, CliError> {
    let lambda = required(args.lambda, cfg.lambda, "lambda")?;
    let t = required(args.t, cfg.t, "T")?;
    let eps = required(args.epsilon, cfg.epsilon, "epsilon")?;
    let gain = args.gain.or(cfg.gain).unwrap_or(1.0);
    let protocol = ProtocolParams::new(lambda, 1.0, gain, PsucModel::UpperBound)?;
    let channel = ChannelParams::new(t, eps)?;
    let e = effective_params(&protocol, &channel)?;
    let mut row: Vec<String> = [lambda, t, eps, gain, e.zeta, e.eta, e.eps_g].map(number).to_vec();
    row.push(e.feasible.to_string());
    row.push(e.binding_constraint.to_string());
    let summary = format!(
        "zeta {}, eta {}, eps_g {}",
        number(e.zeta),
        number(e.eta),
        number(e.eps_g)
    );
    let mut report = Report::new(
        &["lambda", "T", "epsilon", "gain", "zeta", "eta", "eps_g", "feasible", "binding_constraint"],
        vec![row],
        summary,
    );
    if !e.feasible {
        report.failure = Some(Error::Infeasible(e.binding_constraint).into());
    }
    Ok(report)
}

pub fn sweep_losses(args: SweepLossesArgs, cfg: &Config) -> Result<Report, CliError> {
    let eps = required(args.epsilon, cfg.epsilon, "epsilon")?;
    let beta = required(args.beta, cfg.beta, "beta")?;
    let gain = args.gain.or(cfg.gain).unwrap_or(1.0);
    let grid = range(args.range, &cfg.range, None)?;
    let psuc = psuc(args.psuc, cfg)?;
    ProtocolParams::new(0.0, beta, gain, psuc)?;
    ChannelParams::new(1.0, eps)?;

    let rows = grid
        .points()
        .into_par_iter()
        .map(|db| -> Result<Vec<String>, Error> {
            let channel = ChannelParams::from_loss_db(db, eps)?;
            let plain = optimized(&channel, beta, 1.0, psuc)?;
            let amplified = optimized(&channel, beta, gain, psuc)?;
            let value = |r: &Option<OptimizationReport>| r.map_or(f64::NAN, |r| r.max_value);
            Ok(vec![
                number(db),
                number(channel.transmittance()),
                number(amplified.map_or(f64::NAN, |r| r.argmax)),
                number(value(&plain)),
                number(value(&amplified)),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;

    let opts = SearchOptions {
        max_loss_db: grid.stop.max(SearchOptions::default().max_loss_db),
        ..SearchOptions::default()
    };
    let plain = find_loss_limit_with(eps, beta, 1.0, psuc, &opts);
    let amplified = find_loss_limit_with(eps, beta, gain, psuc, &opts);
    let mut summary = format!(
        "zero crossing without NLA at {}, with g={} at {}",
        crossing_text(&plain),
        number(gain),
        crossing_text(&amplified)
    );
    if let (Ok(a), Ok(b)) = (&plain, &amplified) {
        summary.push_str(&format!(" (shift {} dB)", number(b - a)));
    }
    Ok(Report::new(
        &["loss_db", "T", "opt_var", "keyrate_nonla", "keyrate_nla"],
        rows,
        summary,
    ))
}

pub fn contour_noise(args: ContourNoiseArgs, cfg: &Config) -> Result<Report, CliError> {
    let beta = required(args.beta, cfg.beta, "beta")?;
    let gains = args.gains.or_else(|| cfg.gains.clone()).unwrap_or_else(|| vec![1.0]);
    if gains.is_empty() {
        return Err(CliError::Usage("--gains must list at least one gain".into()));
    }
    let grid = range(args.range, &cfg.range, None)?;
    let psuc = psuc(args.psuc, cfg)?;
    for &g in &gains {
        ProtocolParams::new(0.0, beta, g, psuc)?;
    }

    let cells: Vec<(f64, f64)> = grid
        .points()
        .into_iter()
        .flat_map(|db| gains.iter().map(move |&g| (db, g)))
        .collect();
    let rows = cells
        .into_par_iter()
        .map(|(db, g)| -> Result<Vec<String>, Error> {
            let eps_max = match max_excess_noise(db, beta, g, psuc) {
                Ok(e) => e,
                Err(Error::NotPositive) => f64::NAN,
                Err(e) => return Err(e),
            };
            Ok(vec![number(db), number(db_to_transmittance(db)), number(g), number(eps_max)])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let positive = rows.iter().filter(|r| r[3] != "nan").count();
    Ok(Report::new(
        &["loss_db", "T", "gain", "eps_max"],
        rows,
        format!("{positive} of {} points admit a positive key rate", grid.points().len() * gains.len()),
    ))
}

pub fn gain_scan(args: GainScanArgs, cfg: &Config) -> Result<Report, CliError> {
    let eps = required(args.epsilon, cfg.epsilon, "epsilon")?;
    if args.gmax_curve || cfg.gmax_curve.unwrap_or(false) {
        let grid = range(args.range, &cfg.range, None)?;
        ChannelParams::new(1.0, eps)?;
        let rows = grid
            .points()
            .into_par_iter()
            .map(|db| -> Result<Vec<String>, Error> {
                let channel = ChannelParams::from_loss_db(db, eps)?;
                Ok(vec![number(db), number(channel.transmittance()), number(g_max(&channel))])
            })
            .collect::<Result<Vec<_>, _>>()?;
        let summary = format!(
            "g_max from {} to {} over {} loss points",
            rows[0][2],
            rows[rows.len() - 1][2],
            rows.len()
        );
        return Ok(Report::new(&["loss_db", "T", "g_max"], rows, summary));
    }

    let beta = required(args.beta, cfg.beta, "beta")?;
    let loss_db = required(args.loss_db, cfg.loss_db, "loss-db")?;
    let psuc = psuc(args.psuc, cfg)?;
    let channel = ChannelParams::from_loss_db(loss_db, eps)?;
    let top = g_max(&channel);
    let gains = match args.range.or_else(|| cfg.range.clone()) {
        Some(text) => text.parse::<Range>().map_err(CliError::Usage)?.points(),
        None => {
            if !top.is_finite() {
                return Err(CliError::Usage("g_max is unbounded without excess noise; pass --range".into()));
            }
            let n = args.points.or(cfg.points).unwrap_or(200);
            if n < 2 {
                return Err(CliError::Usage("--points must be at least 2".into()));
            }
            let hi = 1.0 + (top - 1.0) * (1.0 - 1e-9);
            (0..n).map(|i| 1.0 + (hi - 1.0) * i as f64 / (n - 1) as f64).collect()
        }
    };
    for &g in &gains {
        ProtocolParams::new(0.0, beta, g, psuc)?;
    }

    let results = gains
        .par_iter()
        .map(|&g| match optimize_key_rate(&channel, beta, g, OptVariable::default_for(g), psuc) {
            Ok(r) => Ok((g, Some(r), "none".to_string())),
            Err(Error::Infeasible(c)) => Ok((g, None, c.to_string())),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let best = results
        .iter()
        .filter_map(|(g, r, _)| r.map(|r| (*g, r.max_value)))
        .fold(None, |acc: Option<(f64, f64)>, (g, v)| match acc {
            Some((_, bv)) if bv >= v => acc,
            _ => Some((g, v)),
        });
    let rows = results
        .into_iter()
        .map(|(g, r, c)| {
            vec![
                number(g),
                number(r.map_or(f64::NAN, |r| r.argmax)),
                number(r.map_or(f64::NAN, |r| r.max_value)),
                c,
            ]
        })
        .collect();
    let summary = match best {
        Some((g, v)) => format!(
            "best rate {} bits per channel use at g={} (g_max {})",
            number(v),
            number(g),
            number(top)
        ),
        None => format!("no feasible gain on the grid (g_max {})", number(top)),
    };
    Ok(Report::new(&["gain", "opt_var", "keyrate", "binding_constraint"], rows, summary))
}

pub fn tlim(args: TlimArgs, cfg: &Config) -> Result<Report, CliError> {
    let eps = required(args.epsilon, cfg.epsilon, "epsilon")?;
    let beta = required(args.beta, cfg.beta, "beta")?;
    let gain = args.gain.or(cfg.gain).unwrap_or(1.0);
    let lambda = match args.lambda.or(cfg.lambda) {
        Some(l) => l,
        None => lambda_opt(beta)?,
    };
    let t = t_lim_with_gain(lambda, eps, beta, gain)?;
    let db = transmittance_to_db(t);
    Ok(Report::new(
        &["lambda", "epsilon", "beta", "gain", "t_lim", "loss_db"],
        vec![[lambda, eps, beta, gain, t, db].map(number).to_vec()],
        format!("T_lim {} ({} dB) at lambda {}", number(t), number(db), number(lambda)),
    ))
}

pub fn lambda_optimum(args: LambdaOptArgs, cfg: &Config) -> Result<Report, CliError> {
    if args.sweep || cfg.sweep.unwrap_or(false) {
        let grid = range(args.range, &cfg.range, Some("0.5:0.99:0.01"))?;
        let rows = grid
            .points()
            .into_par_iter()
            .map(|beta| lambda_opt(beta).map(|l| vec![number(beta), number(l)]))
            .collect::<Result<Vec<_>, _>>()?;
        let summary = format!("lambda_opt tabulated at {} values of beta", rows.len());
        return Ok(Report::new(&["beta", "lambda_opt"], rows, summary));
    }
    let beta = required(args.beta, cfg.beta, "beta")?;
    let l = lambda_opt(beta)?;
    Ok(Report::new(
        &["beta", "lambda_opt"],
        vec![vec![number(beta), number(l)]],
        format!("lambda_opt {}", number(l)),
    ))
}

pub fn oracle(args: OracleArgs, cfg: &Config) -> Result<Report, CliError> {
    let lambda = required(args.lambda, cfg.lambda, "lambda")?;
    let t = required(args.t, cfg.t, "T")?;
    let eps = required(args.epsilon, cfg.epsilon, "epsilon")?;
    let gain = required(args.gain, cfg.gain, "gain")?;
    let opts = OracleOptions {
        dim: args.dim.or(cfg.dim).unwrap_or(60),
        order: args.order.or(cfg.order).unwrap_or(41),
        max_dim: args.max_dim.or(cfg.max_dim).unwrap_or(256),
    };
    let protocol = ProtocolParams::new(lambda, 1.0, gain, PsucModel::UpperBound)?;
    let channel = ChannelParams::new(t, eps)?;
    let r = verify_equivalent_channel(&protocol, &channel, &opts)?;
    let mut row: Vec<String> = [lambda, t, eps, gain].map(number).to_vec();
    row.push(r.dim_used.to_string());
    row.extend(
        [
            r.oracle_x.a,
            r.oracle_x.b,
            r.oracle_x.c,
            r.oracle_p.a,
            r.oracle_p.b,
            r.oracle_p.c,
            r.closed_form.a,
            r.closed_form.b,
            r.closed_form.c,
            r.max_deviation,
        ]
        .map(number),
    );
    Ok(Report::new(
        &[
            "lambda",
            "T",
            "epsilon",
            "gain",
            "dim_used",
            "a_x",
            "b_x",
            "c_x",
            "a_p",
            "b_p",
            "c_p",
            "a_closed",
            "b_closed",
            "c_closed",
            "max_deviation",
        ],
        vec![row],
        format!("max covariance deviation {} at dim {}", number(r.max_deviation), r.dim_used),
    ))
}
