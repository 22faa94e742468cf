use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Mismatched handles or malformed algebraic data.
    #[error("structural error: {0}")]
    Structural(String),
    /// Input violates a documented precondition (mode lattice, space kind, ...).
    #[error("validation error: {0}")]
    Validation(String),
    /// The truncated slice is too small for the requested computation.
    #[error("truncation too small: {0}")]
    Truncation(String),
    /// A derived object failed to be consistent (e.g. no current fits the commutators).
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
