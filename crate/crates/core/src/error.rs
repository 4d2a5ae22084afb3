use alloc::string::String;
use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("eigensolver did not converge (residual {residual:e})")]
    Eigensolver { residual: f64 },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("kernel evaluation failed for items ({i}, {j}): {reason}")]
    Kernel { i: usize, j: usize, reason: String },
    #[error("Gram matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("SVM solver stopped after {evaluations} kernel evaluations with KKT gap {gap:e}")]
    NotConverged { evaluations: u64, gap: f64 },
    #[error("invalid labels: {0}")]
    Labels(String),
}

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
