//! Library side of the `skewdet` command: problem files, command dispatch
//! and report rendering. The binary only parses arguments and maps errors
//! to exit codes.

pub mod commands;
pub mod problem;
pub mod report;

use thiserror::Error;

/// Failures, each tied to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input.
    #[error("{0}")]
    Parse(String),
    /// The engines returned different answers under `--algo all`.
    #[error("engines disagree: {0}")]
    Disagreement(String),
    /// The query does not apply to the given twist.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Disagreement(_) => 3,
            CliError::Unsupported(_) => 4,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

impl From<skewdet::Error> for CliError {
    fn from(e: skewdet::Error) -> Self {
        match e {
            skewdet::Error::Invalid(m) => CliError::Parse(m),
            skewdet::Error::Field(f) => CliError::Parse(f.to_string()),
            skewdet::Error::Unsupported(m) => CliError::Unsupported(m),
            skewdet::Error::Disagreement(m) => CliError::Disagreement(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}
