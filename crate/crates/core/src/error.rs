use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The caller supplied data that violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A property that holds mathematically failed numerically. Seeing this
    /// means a bug in the implementation, not a counterexample.
    #[error("internal check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
