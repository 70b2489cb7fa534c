use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("invalid scenario at `{path}`: {message}")]
    Invariant { path: String, message: String },
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error("simulation failed: {0}")]
    Simulation(#[from] crate::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl HarnessError {
    /// Stable identifier printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            HarnessError::Read { .. } => "E_READ",
            HarnessError::Parse(_) => "E_PARSE",
            HarnessError::Schema { .. } => "E_SCHEMA",
            HarnessError::Invariant { .. } => "E_INVARIANT",
            HarnessError::Sweep(_) => "E_SWEEP",
            HarnessError::Simulation(_) => "E_SIMULATION",
            HarnessError::Write { .. } => "E_WRITE",
        }
    }

    /// 1 for configuration problems, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Read { .. }
            | HarnessError::Parse(_)
            | HarnessError::Schema { .. }
            | HarnessError::Invariant { .. }
            | HarnessError::Sweep(_) => 1,
            HarnessError::Simulation(_) | HarnessError::Write { .. } => 2,
        }
    }
}
