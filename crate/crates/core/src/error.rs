use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QecError {
    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("product has an imaginary phase and is not a Hermitian Pauli")]
    NonHermitian,
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("classical bit {bit} out of range for {m} bits")]
    BitOutOfRange { bit: usize, m: usize },
    #[error("CNOT control and target must differ (qubit {0})")]
    DuplicateTarget(usize),
    #[error("dense engine is limited to {max} qubits, circuit has {n}")]
    EngineLimit { n: usize, max: usize },
    #[error("forced outcome {outcome} at collapse {index} has zero probability")]
    InfeasibleBranch { index: usize, outcome: bool },
    #[error("forced outcome stream exhausted at collapse {0}")]
    ForcedExhausted(usize),
    #[error("gate {gate} reads classical bit {bit} before the measurement that writes it")]
    ClassicalOrder { gate: usize, bit: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("assignment violates Gauss' law at site {site}")]
    GaugeViolation { site: usize },
    #[error("unsupported scheme: {0}")]
    UnsupportedScheme(String),
    #[error("invalid fault: {0}")]
    InvalidFault(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, QecError>;
