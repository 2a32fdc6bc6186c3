use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("row is not unimodular")]
    NotUnimodular,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A certificate or identity did not check. For constructions that are
    /// supposed to always verify this signals a bug.
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn dims<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}
