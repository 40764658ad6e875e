use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {what} = {requested} > {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("polynomial degree {degree} exceeds truncation degree {max_degree}")]
    DegreeOverflow { degree: usize, max_degree: usize },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NonUnitary { residual: f64 },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("operators {i} and {j} do not commute (residual {residual:.3e})")]
    NonCommuting { i: usize, j: usize, residual: f64 },

    #[error("row norm exceeds one: largest eigenvalue of sum T_k T_k^* is 1 + {excess:.3e}")]
    RowNormExceeded { excess: f64 },

    #[error("subspace is not co-invariant (residual {residual:.3e})")]
    NotCoInvariant { residual: f64 },

    #[error("operator bases differ: ({d1}, {n1}) vs ({d2}, {n2})")]
    BasisMismatch {
        d1: usize,
        n1: usize,
        d2: usize,
        n2: usize,
    },

    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    }
}
