use thiserror::Error;

/// Errors produced by simulation, reconstruction, and I/O routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubit(s)")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("classical bit index {index} out of range for {n_clbits} bit(s)")]
    ClbitOutOfRange { index: usize, n_clbits: usize },

    #[error("gate {0} is not unitary and cannot be applied to a statevector")]
    NonUnitaryGate(String),

    #[error("circuit contains a measurement; use the measurement path instead")]
    MeasureInUnitaryPath,

    #[error("{kind} expects {expected} target(s), got {got}")]
    BadArity {
        kind: String,
        expected: usize,
        got: usize,
    },

    #[error("two-qubit gate targets must be distinct (got qubit {0} twice)")]
    DuplicateTargets(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state is too small: need at least {min} qubit(s), got {got}")]
    TooFewQubits { min: usize, got: usize },

    #[error("system of {0} qubits exceeds the dense density-matrix limit of {1}")]
    TooManyQubits(usize, usize),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("amplitude array length {0} is not a power of two")]
    BadStateLength(usize),

    #[error("state norm deviates from 1 by {0:.3e}")]
    NotNormalized(f64),

    #[error("z-state index {k} out of range for {n} qubit(s) (need k < 2^{n})")]
    ZIndexOutOfRange { n: usize, k: usize },

    #[error("malformed Pauli label: {0}")]
    MalformedPauli(String),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("ancilla bitstring has length {got}, expected {expected}")]
    BadSyndromeLength { expected: usize, got: usize },

    #[error("bitstring may contain only '0' and '1': {0:?}")]
    BadBitstring(String),

    #[error("tomography settings incomplete: missing a setting covering {0}")]
    MissingSetting(String),

    #[error("expectation map incomplete: missing {0}")]
    MissingExpectation(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix has a negative eigenvalue ({0:.3e})")]
    NotPositiveSemidefinite(f64),

    #[error("projection of a zero-probability outcome; state is numerically corrupt")]
    ZeroProbabilityProjection,

    #[error("unsupported gate for QASM emission: {0}")]
    UnsupportedQasmGate(String),

    #[error("QASM syntax error at line {line}, column {col}: {msg}")]
    QasmSyntax { line: usize, col: usize, msg: String },

    #[error("unknown register reference {name:?} at line {line}")]
    UnknownRegister { name: String, line: usize },

    #[error("malformed noise specification {0:?} (expected \"depol:<p1>,<p2>;readout:<p>\")")]
    BadNoiseSpec(String),

    #[error("JSON decode failed: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
