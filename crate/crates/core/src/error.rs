use thiserror::Error;

/// Errors produced by basis construction, Hamiltonian assembly, diagonalization,
/// state preparation and observable evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("occupation ({n1}, {n2}) outside basis with m_cut = {m_cut}")]
    OccupationOutOfRange { n1: usize, n2: usize, m_cut: usize },

    #[error("basis index {index} outside dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operator flagged Hermitian deviates from its adjoint by {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error(
        "truncation weight {weight:.3e} exceeds threshold {threshold:.3e}; increase m_cut"
    )]
    Truncation { weight: f64, threshold: f64 },

    #[error("eigensolver failed to converge on eigenvalue {index} after {iterations} QL sweeps")]
    NoConvergence { index: usize, iterations: usize },

    #[error("eigendecomposition certificate failed: {0}")]
    Certificate(String),

    #[error("numerical invariant violated: {0}")]
    Invariant(String),

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("short-time assembly disagrees with the commutator route by {defect:.3e}")]
    ExpansionMismatch { defect: f64 },

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache format: {0}")]
    CacheFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
