use thiserror::Error;

/// Errors raised by the entanglement toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("subsystem mask is empty")]
    EmptyMask,

    #[error("subsystem mask indices must be strictly increasing: {0:?}")]
    UnorderedMask(Vec<usize>),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unsupported qubit count {0} (allowed 1..=8)")]
    QubitCount(usize),

    #[error("state norm deviates from 1 by {0:e}")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    BadTrace(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("alpha must be >= 1, got {0}")]
    InvalidAlpha(f64),

    #[error("concurrence-like value {0} outside [0, 1]")]
    OutOfUnitInterval(f64),

    #[error("invalid pairing layout: {0}")]
    InvalidLayout(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state is not in the violation region (residual {0:e})")]
    NotViolating(f64),

    #[error("unsupported archive format version {0}")]
    UnknownVersion(u32),

    #[error("malformed archive: {0}")]
    Malformed(String),

    #[error("stored residuals do not match re-evaluation (deviation {0:e})")]
    ResidualMismatch(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
