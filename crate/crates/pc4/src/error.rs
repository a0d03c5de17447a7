use thiserror::Error;

/// Errors produced by the algebra engine and the classification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("subalgebra closure did not stabilize within {max_iter} iterations (last rank {last_rank})")]
    NoConvergence { max_iter: usize, last_rank: usize },

    /// An internal consistency check failed. This indicates a bug (for
    /// instance a canonical triple matching no pattern), not bad input.
    #[error("internal defect: {0}")]
    Defect(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
