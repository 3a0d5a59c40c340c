//! Error type shared across the crate, with stable process exit codes for
//! the CLI and FFI surfaces.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("subspace is not contained in the other")]
    NotNested,
    #[error("transform matrix is singular")]
    SingularTransform,
    #[error("the zero polynomial has no root decomposition")]
    ZeroPolynomial,
    #[error("chain is not singular (must start and end at zero)")]
    NotSingular,
    #[error("sequence of pairs is not a chain in the relation: {0}")]
    NotAChain(String),
    #[error("eigenvalue discovery left unresolved factors: {0}")]
    UnresolvedEigenvalues(String),
    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),
    #[error("formula yields an infeasible row count")]
    Infeasible,
    #[error("pencil difference is not of rank one (normal rank {0})")]
    NotRankOne(usize),
    #[error("perturbation data is identically zero")]
    ZeroPerturbation,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI/FFI exit code: 2 input error, 3 unresolved eigenvalues,
    /// 4 internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnresolvedEigenvalues(_) => 3,
            Error::InconsistentInvariants(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
