mod cli;
mod commands;
mod config;
mod error;
mod format;
mod grid;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::commands::Report;
use crate::config::Config;
use crate::error::CliError;

const JOBS_ENV: &str = "NLA_CVQKD_JOBS";

fn jobs(flag: Option<usize>, cfg: &Config) -> Result<usize, CliError> {
    let n = match (flag, std::env::var(JOBS_ENV)) {
        (Some(n), _) => n,
        (None, Ok(v)) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{JOBS_ENV} must be a positive integer, got `{v}`")))?,
        (None, Err(_)) => cfg
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
    };
    if n == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(n)
}

fn write_csv(report: &Report, sink: Box<dyn Write>) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(report.header)?;
    for row in &report.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs(cli.jobs, &cfg)?)
        .build()?;
    let report = pool.install(|| match cli.command {
        Command::Keyrate(a) => commands::keyrate(a, &cfg),
        Command::EffectiveParams(a) => commands::effective(a, &cfg),
        Command::SweepLosses(a) => commands::sweep_losses(a, &cfg),
        Command::ContourNoise(a) => commands::contour_noise(a, &cfg),
        Command::GainScan(a) => commands::gain_scan(a, &cfg),
        Command::Tlim(a) => commands::tlim(a, &cfg),
        Command::LambdaOpt(a) => commands::lambda_optimum(a, &cfg),
        Command::OracleVerify(a) => commands::oracle(a, &cfg),
    })?;

    let sink: Box<dyn Write> = match cli.output.or_else(|| cfg.output.clone()) {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    write_csv(&report, sink)?;
    println!("{}", report.summary);
    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.diagnostic());
            ExitCode::from(e.exit_code())
        }
    }
}
