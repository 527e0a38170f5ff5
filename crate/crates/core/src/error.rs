use thiserror::Error;

use crate::tensor::Domain;

pub type Result<T, E = PolarError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolarError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("operands are not conformable along axis {axis}: {detail}")]
    Conformability { axis: usize, detail: String },

    #[error("expected a {expected} tensor, found {found}")]
    Domain { expected: Domain, found: Domain },

    #[error("singular at (r,m) = ({}): |spectrum| = {magnitude:e} <= {eps:e}", join(.index))]
    SingularSpectrum {
        /// Multi-index `[r, m_1, .., m_d]` of the first offending coefficient.
        index: Vec<usize>,
        magnitude: f64,
        eps: f64,
    },

    #[error("tensor is not self-adjoint (max asymmetry {max_asymmetry:e} > tol {tol:e})")]
    NotSelfAdjoint { max_asymmetry: f64, tol: f64 },

    #[error("operator is not shift-equivariant (max residual {residual:e})")]
    EquivarianceViolation { residual: f64 },

    #[error("rotor has {rotor} shifts but the tensor has {tensor} angular axes")]
    RotorAxes { rotor: usize, tensor: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("channel-mixing matrix is not symmetric (|W[{row},{col}] - W[{col},{row}]| = {gap:e})")]
    Asymmetric { row: usize, col: usize, gap: f64 },

    #[error("frequency mask is empty")]
    EmptyMask,

    #[error("shard plan does not partition the index set: {0}")]
    PartitionCoverage(String),

    #[error("expected an even-length vector, got length {0}")]
    OddLength(usize),

    #[error("malformed tensor file: {0}")]
    Format(String),
}

fn join(index: &[usize]) -> String {
    index.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}
