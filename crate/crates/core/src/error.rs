use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by game construction, the exact oracles and the experiment driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size guard exceeded: {what} needs {required} but the guard allows {limit}")]
    SizeGuardExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("degenerate variance: future-action noise is zero at state {state}, action {action}")]
    DegenerateVariance { state: usize, action: usize },

    #[error("invalid config field `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    #[error("io failure on {path}: {source}")]
    IoFailure {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::IoFailure {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag used by the CLI's one-line error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SizeGuardExceeded { .. } => "SizeGuardExceeded",
            Error::DegenerateVariance { .. } => "DegenerateVariance",
            Error::InvalidConfig { .. } => "InvalidConfig",
            Error::IoFailure { .. } => "IoFailure",
            Error::Checkpoint(_) => "Checkpoint",
            Error::CheckFailed(_) => "CheckFailed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
