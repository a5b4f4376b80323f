use thiserror::Error;

/// Errors raised by the simulator, the encoders and the clustering layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("requested {requested} qubits exceeds the configured maximum of {max}")]
    TooManyQubits { requested: usize, max: usize },

    #[error("qubit index {index} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("target qubit {0} also appears among the controls")]
    TargetIsControl(usize),

    #[error("qubit {0} is used by more than one register operand")]
    OverlappingQubits(usize),

    #[error("swap registers differ in length ({left} vs {right})")]
    RegisterLengthMismatch { left: usize, right: usize },

    #[error("expected {expected} amplitudes, got {actual}")]
    AmplitudeShape { expected: usize, actual: usize },

    #[error("amplitudes have squared norm {norm_sqr}, expected 1")]
    NotNormalized { norm_sqr: f64 },

    #[error("register starting at qubit {start} is not in its all-zeros state")]
    RegisterNotGround { start: usize },

    #[error("state norm drifted to {norm_sqr} (internal consistency violated)")]
    NormDrift { norm_sqr: f64 },

    #[error("shots must be at least 1")]
    ZeroShots,

    #[error("epsilon {0} must lie in (0, 0.5)")]
    InvalidEpsilon(f64),

    #[error("empty input: at least one vector is required")]
    EmptyInput,

    #[error("row {row}: expected {expected} coordinates, found {found}")]
    RaggedRow { row: usize, expected: usize, found: usize },

    #[error("row {row}: zero vector cannot be amplitude-encoded")]
    ZeroVector { row: usize },

    #[error("row {row}, column {column}: non-finite value")]
    NonFinite { row: usize, column: usize },

    #[error("dimension mismatch: point has {point} coordinates, set has {set}")]
    DimensionMismatch { point: usize, set: usize },

    #[error("k = {k} is invalid for a set of {m} points")]
    InvalidK { k: usize, m: usize },

    #[error("median index {index} is out of range for {m} points")]
    MedianOutOfRange { index: usize, m: usize },

    #[error("median index {0} listed more than once")]
    DuplicateMedian(usize),

    #[error("expected {expected} medians, got {actual}")]
    MedianCount { expected: usize, actual: usize },

    #[error("label count {labels} does not match point count {points}")]
    LabelCount { labels: usize, points: usize },

    #[error("cluster id {id} is out of range for k = {k}")]
    ClusterOutOfRange { id: usize, k: usize },

    #[error("max_iterations must be at least 1")]
    ZeroIterations,
}

impl Error {
    /// Coarse classification used by front ends to pick exit codes.
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            EmptyInput | RaggedRow { .. } | ZeroVector { .. } | NonFinite { .. } => {
                ErrorKind::Ingestion
            }
            NotNormalized { .. } | NormDrift { .. } | TooManyQubits { .. } => ErrorKind::Numeric,
            _ => ErrorKind::Validation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Ingestion,
    Numeric,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
