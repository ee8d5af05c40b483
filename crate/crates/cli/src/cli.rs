use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Key rates of Gaussian-modulated CV-QKD with a noiseless linear amplifier.
///
/// Every subcommand writes a CSV table (header plus one row per grid point)
/// and prints a one-line summary. Flags override values read from `--config`.
#[derive(Debug, Parser)]
#[command(name = "nla-cvqkd", version)]
pub struct Cli {
    /// Write the CSV here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// TOML file whose keys mirror the flag names.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for grid evaluation [env: NLA_CVQKD_JOBS; default: available CPUs].
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Key rate at a single operating point.
    Keyrate(PointArgs),
    /// Effective (ζ, η, ε^g) of the amplified channel.
    EffectiveParams(PointArgs),
    /// Optimized key rate with and without amplification against losses.
    SweepLosses(SweepLossesArgs),
    /// Largest tolerable excess noise against losses.
    ContourNoise(ContourNoiseArgs),
    /// Optimized amplified key rate against the gain, or `g_max` against losses.
    GainScan(GainScanArgs),
    /// Closed-form loss limit from the strong-loss expansion.
    Tlim(TlimArgs),
    /// EPR parameter maximizing the strong-loss key rate.
    LambdaOpt(LambdaOptArgs),
    /// Brute-force Fock-space check of the effective channel.
    OracleVerify(OracleArgs),
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// EPR parameter λ in [0, 1).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Channel transmittance in (0, 1].
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Excess noise (shot-noise units, referred to the input).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Reconciliation efficiency in (0, 1].
    #[arg(long)]
    pub beta: Option<f64>,
    /// Amplifier gain, at least 1 [default: 1].
    #[arg(long)]
    pub gain: Option<f64>,
    /// Success probability: `upper` for 1/g², or a constant in (0, 1] [default: upper].
    #[arg(long)]
    pub psuc: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepLossesArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Amplifier gain for the amplified curve [default: 1].
    #[arg(long)]
    pub gain: Option<f64>,
    /// Losses in dB as start:stop:step.
    #[arg(long)]
    pub range: Option<String>,
    #[arg(long)]
    pub psuc: Option<String>,
}

#[derive(Debug, Args)]
pub struct ContourNoiseArgs {
    #[arg(long)]
    pub beta: Option<f64>,
    /// Comma-separated gains [default: 1].
    #[arg(long, value_delimiter = ',')]
    pub gains: Option<Vec<f64>>,
    /// Losses in dB as start:stop:step.
    #[arg(long)]
    pub range: Option<String>,
    #[arg(long)]
    pub psuc: Option<String>,
}

#[derive(Debug, Args)]
pub struct GainScanArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Channel losses in dB.
    #[arg(long)]
    pub loss_db: Option<f64>,
    /// Gains as start:stop:step; with --gmax-curve, losses in dB.
    #[arg(long)]
    pub range: Option<String>,
    /// Evenly spaced gains on [1, g_max) when no range is given [default: 200].
    #[arg(long)]
    pub points: Option<usize>,
    /// Tabulate g_max against losses instead.
    #[arg(long)]
    pub gmax_curve: bool,
    #[arg(long)]
    pub psuc: Option<String>,
}

#[derive(Debug, Args)]
pub struct TlimArgs {
    /// EPR parameter [default: the optimum for --beta].
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Amplifier gain [default: 1].
    #[arg(long)]
    pub gain: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LambdaOptArgs {
    #[arg(long)]
    pub beta: Option<f64>,
    /// Tabulate against β instead.
    #[arg(long)]
    pub sweep: bool,
    /// β grid as start:stop:step [default: 0.5:0.99:0.01].
    #[arg(long)]
    pub range: Option<String>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub gain: Option<f64>,
    /// Initial Fock cutoff [default: 60].
    #[arg(long)]
    pub dim: Option<usize>,
    /// Gauss–Hermite points per quadrature [default: 41].
    #[arg(long)]
    pub order: Option<usize>,
    /// Largest cutoff tried when truncation fails [default: 256].
    #[arg(long)]
    pub max_dim: Option<usize>,
}
