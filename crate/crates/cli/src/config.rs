//! Optional TOML configuration whose keys mirror the command-line flags.
//!
//! ```toml
//! epsilon = 0.05
//! beta = 0.95
//! gain = 4
//! range = "0:50:0.5"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub lambda: Option<f64>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub epsilon: Option<f64>,
    pub beta: Option<f64>,
    pub gain: Option<f64>,
    pub gains: Option<Vec<f64>>,
    pub psuc: Option<toml::Value>,
    pub range: Option<String>,
    pub loss_db: Option<f64>,
    pub points: Option<usize>,
    pub gmax_curve: Option<bool>,
    pub sweep: Option<bool>,
    pub dim: Option<usize>,
    pub order: Option<usize>,
    pub max_dim: Option<usize>,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| CliError::ConfigParse {
            path: path.to_path_buf(),
            source,
        })
    }

    /// `psuc` as the string form accepted on the command line.
    pub fn psuc_text(&self) -> Result<Option<String>, CliError> {
        match &self.psuc {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(toml::Value::Float(x)) => Ok(Some(x.to_string())),
            Some(toml::Value::Integer(x)) => Ok(Some(x.to_string())),
            Some(other) => Err(CliError::Usage(format!(
                "config key `psuc` must be \"upper\" or a number, got {other}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Config;

    #[test]
    fn parses_flag_named_keys() {
        let c: Config = toml::from_str(
            "T = 0.1\nepsilon = 0.05\ngain = 4\ngains = [1, 2.5]\nmax-dim = 128\ngmax-curve = true\npsuc = 0.01\n",
        )
        .unwrap();
        assert_eq!(c.t, Some(0.1));
        assert_eq!(c.gain, Some(4.0));
        assert_eq!(c.gains, Some(vec![1.0, 2.5]));
        assert_eq!(c.max_dim, Some(128));
        assert_eq!(c.gmax_curve, Some(true));
        assert_eq!(c.psuc_text().unwrap().as_deref(), Some("0.01"));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<Config>("epsilonn = 0.1").is_err());
    }
}
