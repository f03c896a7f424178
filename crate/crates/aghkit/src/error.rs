//! Error and result types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// The caller handed us something malformed (bad parameter, bad file, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A vertex set does not affinely span the ambient space.
    #[error("polytope is not full-dimensional: affine rank {affine_rank} < ambient dimension {dimension}")]
    DimensionDeficiency { affine_rank: usize, dimension: usize },

    /// Parse failure in one of the text formats, with a 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The numeric data contradicts itself (e.g. a profile no graded ring can have).
    #[error("inconsistent profile: {0}")]
    InconsistentProfile(String),

    /// An internal cross-check failed; indicates a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    /// The requested quantity is undefined for this input.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// A computation would exceed a configured size cap.
    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    /// Exact integer data does not fit the fixed-width fast path.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Error {
    /// Process exit code contract: 1 for computation inconsistencies,
    /// 2 for problems with the input itself.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) | Error::InconsistentProfile(_) | Error::Overflow(_) => 1,
            _ => 2,
        }
    }
}
