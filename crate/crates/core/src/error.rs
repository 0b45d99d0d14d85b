//! Error type shared by all frameforge modules.

use thiserror::Error;

/// Errors reported by frame, decomposition, and diagnostic operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    ShapeError(String),

    #[error("matrix is not Hermitian (deviation {deviation:.3e} exceeds tolerance)")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("operator is singular within tolerance (margin {margin:.3e})")]
    SingularOperator { margin: f64 },

    #[error("vector family is not a frame (spectral margin {margin:.3e})")]
    NotAFrame { margin: f64 },

    #[error("vector family is not a Riesz basis (margin {margin:.3e})")]
    NotRieszBasis { margin: f64 },

    #[error("frame is not Parseval (deviation from identity {deviation:.3e})")]
    NotParseval { deviation: f64 },

    #[error("operator norm {norm} exceeds 1")]
    NormTooLarge { norm: f64 },

    #[error("operator is not a topological isomorphism (margin {margin:.3e})")]
    NotIsomorphism { margin: f64 },

    #[error("epsilon {epsilon} outside the open interval (0, 1)")]
    InvalidEpsilon { epsilon: f64 },

    #[error("invalid subspace description: {0}")]
    InvalidSubspace(String),

    #[error("invalid budget ladder: {0}")]
    InvalidBudgets(String),

    #[error("parameter p = {p} outside the open interval (1, 2), or k below its legal minimum")]
    InvalidP { p: f64 },

    #[error("requested truncation of {requested} vectors exceeds the cap of {max}")]
    BudgetTooLarge { requested: usize, max: usize },

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("input vectors are not a Riesz sequence (Gram margin {margin:.3e})")]
    NotRieszSequence { margin: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
