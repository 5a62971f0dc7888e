//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GinvError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("tensor is not square: row modes {0:?} != col modes {1:?}")]
    NotSquare(Vec<usize>, Vec<usize>),
    #[error("SVD failed to converge")]
    ConvergenceFailure,
    #[error("tensor is not a generalized inverse: {0}")]
    NotGeneralizedInverse(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("right-hand side is not in the required range space")]
    RhsNotInRange,
    #[error("invalid problem size: {0}")]
    InvalidSize(String),
    #[error("solve mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GinvError>;
