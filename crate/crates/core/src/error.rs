use thiserror::Error;

/// Errors raised by the algebraic layer and the constructions built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: expected {expected}, found {found}")]
    RingMismatch { expected: String, found: String },

    #[error("{0} is not a unit")]
    NotAUnit(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("operation requires a field, got {0}")]
    NotAField(String),

    #[error("operation requires a Laurent ring, got {0}")]
    NotLaurent(String),

    #[error("invalid ring homomorphism: {0}")]
    InvalidHom(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
