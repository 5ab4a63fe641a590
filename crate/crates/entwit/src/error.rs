//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Pauli basis index {0} out of range (0..=255)")]
    BasisIndex(usize),
    #[error("operator is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace:.12} instead of 1")]
    TraceNotOne { trace: f64 },
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),
    #[error("state vector has zero norm")]
    ZeroNorm,
    #[error("expected a 16x16 operator, got {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize },
    #[error("batch of labeled samples is empty")]
    EmptyBatch,
    #[error("training data must contain both classes")]
    SingleClass,
    #[error("family {0} has no pure-state representative")]
    NotPureFamily(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no admissible parameter draw after {attempts} attempts")]
    RetriesExhausted { attempts: usize },
    #[error("rejection sampler found no acceptable state after {attempts} attempts")]
    SamplerExhausted { attempts: usize },
    #[error("dual optimization did not converge after {iterations} iterations (KKT residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error("unsupported dataset version {found} (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 1 validation, 2 I/O, 3 convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            Error::Convergence { .. } => 3,
            _ => 1,
        }
    }
}
