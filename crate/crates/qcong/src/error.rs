//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QError {
    #[error("coefficient ring mismatch: {0}")]
    RingMismatch(String),

    #[error("constant term is not a unit, cannot invert")]
    NonUnitConstant,

    #[error("coefficient at exponent {exponent} has denominator sharing a factor with modulus {modulus}")]
    NotIntegral { exponent: usize, modulus: u64 },

    #[error("series is not in the span of the basis (first bad exponent {0})")]
    NotInSpan(usize),

    #[error("quasimodular form (positive E2-depth) where a modular form is required")]
    Quasimodular,

    #[error("congruence fails at exponent {exponent} (mod {modulus})")]
    CongruenceFailure { exponent: usize, modulus: u64 },

    #[error("space has dimension {dim}, expected an eigenform precondition dim = 1")]
    NotEigenSpace { dim: usize },

    #[error("eigenform verification failed at exponent {0}")]
    NotAnEigenform(u64),

    #[error("nullspace has dimension {0}, expected 1")]
    NullspaceDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pipeline step failed: {0}")]
    Pipeline(String),

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache format: {0}")]
    CacheFormat(String),
}

pub type QResult<T> = Result<T, QError>;
