use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is malformed or of the wrong kind for the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The element is not in the domain of the operation (e.g. not a member).
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The computation exceeds the fixed-width limits of the desk-scale kernel.
    #[error("value too large: {0}")]
    TooLarge(String),
    /// Text or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
