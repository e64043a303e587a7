//! CLI error type with process exit-code mapping.
//!
//! Exit codes: 0 success, 2 parse/validation error, 3 statistical
//! no-decision, 4 non-convergence.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("{0}")]
    Validation(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(benchgate::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                benchgate::Error::AllTies => 3,
                benchgate::Error::NoConvergence(_) => 4,
                _ => 2,
            },
        }
    }
}

impl From<benchgate::Error> for CliError {
    fn from(e: benchgate::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(format!("JSON error: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
