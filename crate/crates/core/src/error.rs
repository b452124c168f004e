use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error("unsupported qubit count {0}")]
    QubitCount(usize),

    #[error("parameter `{field}` has length {got}, expected {expected}")]
    Length { field: &'static str, got: usize, expected: usize },

    #[error("invalid parameter `{field}`: {reason}")]
    Parameter { field: &'static str, reason: String },

    #[error("non-positive tunneling rate {rate} for qubit {qubit} (branch {spin:+})")]
    NonPositiveRate { qubit: usize, spin: i8, rate: f64 },

    #[error("invalid barrier assignment: {0}")]
    Barrier(String),

    #[error("non-uniformity eta = {0} outside [0, 1)")]
    Eta(f64),

    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("state needs {expected} qubits, context has {got}")]
    StateQubits { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("sector layout mismatch")]
    Layout,

    #[error("dimension {0} too large for dense evaluation (limit {limit})", limit = crate::expm::MAX_DENSE_DIM)]
    TooLargeForDense(usize),

    #[error("invalid integration grid: {0}")]
    Grid(String),

    #[error("non-finite state at step {step} (max |entry| {max_abs})")]
    NonFinite { step: usize, max_abs: f64 },

    #[error("trace mismatch in fidelity: {0} vs {1}")]
    TraceMismatch(f64, f64),

    #[error("fidelity has imaginary part {0}")]
    ComplexFidelity(f64),

    #[error("negative dephasing rate {0}")]
    NegativeRate(f64),
}
