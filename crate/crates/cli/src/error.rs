use std::path::PathBuf;

use cvqkd_nla::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read config {}: {source}", path.display())]
    ConfigRead {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("invalid config {}: {source}", path.display())]
    ConfigParse {
        path: PathBuf,
        source: toml::de::Error,
    },

    #[error(transparent)]
    Compute(#[from] Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),

    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::ConfigRead { .. } | CliError::ConfigParse { .. } => 2,
            CliError::Compute(Error::NoConvergence { .. } | Error::NoBracket { .. }) => 4,
            CliError::Compute(_) => 3,
            CliError::Io(_) | CliError::Csv(_) | CliError::Pool(_) => 1,
        }
    }

    /// One-line diagnostic; infeasibility names the violated constraint.
    pub fn diagnostic(&self) -> String {
        match self {
            CliError::Compute(Error::Infeasible(c)) => {
                format!("infeasible parameters: binding constraint {c}")
            }
            other => other.to_string(),
        }
    }
}
