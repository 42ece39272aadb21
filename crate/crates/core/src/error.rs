use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("total dimension {requested} exceeds the configured maximum {max}")]
    Size { requested: usize, max: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("undefined: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
