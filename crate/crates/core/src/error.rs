use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HallError {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("diagram does not commute: {0}")]
    NonCommuting(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, HallError>;
