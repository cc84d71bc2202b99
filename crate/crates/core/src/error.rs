use thiserror::Error;

/// Errors raised anywhere in the synthesis and verification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("WrongWeight: key {key} has Hamming weight {weight}, expected {k}")]
    WrongWeight { key: String, weight: u32, k: u32 },
    #[error("WrongLength: key {key} has length {len}, expected {n}")]
    WrongLength { key: String, len: usize, n: u32 },
    #[error("NotNormalized: squared norm is {norm_sq}, expected 1")]
    NotNormalized { norm_sq: f64 },
    #[error("DuplicateKey: {0} appears more than once")]
    DuplicateKey(String),
    #[error("InvalidK: k = {k} is outside [0, {n}]")]
    InvalidK { n: u32, k: u32 },
    #[error("InvalidN: n = {0} is outside [1, {max}]", max = crate::state::MAX_N)]
    InvalidN(u32),
    #[error("InvalidBitString: {0:?} is not a string of 0 and 1 characters")]
    InvalidBitString(String),
    #[error("DegenerateDraw: random amplitudes were all zero after {0} attempts")]
    DegenerateDraw(usize),
    #[error("TooManyQubits: {qubits} qubits requested, at most {max} supported")]
    TooManyQubits { qubits: usize, max: usize },
    #[error("IndexOutOfRange: qubit {index} on a register of {qubits}")]
    IndexOutOfRange { index: usize, qubits: usize },
    #[error("InvalidGate: {0}")]
    InvalidGate(String),
    #[error("SizeMismatch: state has {state} qubits, spec layout needs {expected}")]
    SizeMismatch { state: usize, expected: usize },
    #[error("QasmParse: line {line}: {message}")]
    QasmParse { line: usize, message: String },
    #[error("Json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("Io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
