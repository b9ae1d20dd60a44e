use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by generation, verification and file IO.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed inconsistent or out-of-range arguments.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A randomized construction could not meet its contract within the retry budget.
    #[error("generation failed: {0}")]
    Generation(String),

    /// An identity that holds by construction was violated. Always a bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("integrity check failed for {path}: expected sha256 {expected}, found {found}")]
    Integrity {
        path: PathBuf,
        expected: String,
        found: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            field: field.into(),
            message: message.into(),
        }
    }
}
