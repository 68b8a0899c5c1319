use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("{width} qubits exceeds the dense limit of {limit}")]
    DenseLimit { width: usize, limit: usize },

    #[error("qubit count {0} out of range: {1}")]
    QubitCount(usize, &'static str),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("sequence length {0} exceeds the factorial guard ({1})")]
    CoverTooLong(usize, usize),

    #[error("label count {0} exceeds the brute-force limit ({1})")]
    TooManyLabels(usize, usize),

    #[error("missing observable {0}")]
    MissingLabel(String),

    #[error("observable {label} failed validation: {reason}")]
    InvalidObservable { label: String, reason: String },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("non-real correlator value (imaginary part {0:.3e})")]
    NonReal(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("subspace not of product form: {0}")]
    NotProductForm(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("not an involution: eigenvalue {0} is not near +1 or -1")]
    NotInvolution(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
