use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value outside domain: {0}")]
    OutOfDomain(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("size bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("no solution found: {0}")]
    NotFound(String),
    #[error("upstream check failed: {0}")]
    Upstream(String),
}

pub type Result<T> = std::result::Result<T, Error>;
