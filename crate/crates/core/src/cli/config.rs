use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Settings read from `--config`. Every key is optional; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub n: Option<usize>,
    pub inner: Option<f64>,
    pub seed: Option<u64>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub delta: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub form: Option<String>,
    pub potential: Option<String>,
    pub u: Option<String>,
    pub family: Option<String>,
    pub k: Option<Vec<f64>>,
    pub exponent: Option<f64>,
    pub ineq: Option<String>,
    pub samples: Option<usize>,
    pub budget: Option<usize>,
    pub p: Option<f64>,
    pub starts: Option<usize>,
    pub measure: Option<String>,
    pub start: Option<String>,
    pub window: Option<usize>,
    pub residual_ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// Flag, then file, then default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
