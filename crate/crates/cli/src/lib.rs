//! Experiment harness for Fourier-Dunkl expansions: zero tables, norm
//! growth of partial sums, convergence curves, kernel sweeps and weight
//! checks, written as CSV or JSON.

pub mod commands;
pub mod config;

use std::io::Write;

pub use commands::*;
pub use config::{ConfigArgs, ExperimentConfig, WeightSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<fourier_dunkl::Error> for CliError {
    fn from(e: fourier_dunkl::Error) -> Self {
        use fourier_dunkl::Error as E;
        match e {
            E::InvalidAlpha(_) | E::InvalidExponent(_) | E::InvalidParameter(_) | E::Order { .. } | E::NotPowerLike => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

/// Writes `content` to the configured output file, or to standard output.
pub fn emit(config: &ExperimentConfig, content: &str) -> Result<(), CliError> {
    match &config.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
        }
    }
}
