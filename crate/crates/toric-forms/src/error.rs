//! Error type shared across the crate.
//!
//! Two failure families matter to callers: input problems (unreadable or
//! malformed data) and mathematical precondition violations (the input
//! parsed fine but the requested computation is not defined for it). The
//! command-line front end maps these to exit codes 1 and 2.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input could not be read or parsed.
    #[error("input error: {0}")]
    Input(String),

    /// Input is well-formed but violates a mathematical precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Internal consistency check failed; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
