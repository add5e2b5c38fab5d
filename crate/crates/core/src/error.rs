use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("graph is not connected")]
    Disconnected,

    #[error("qubit {qubit} out of range for {n} qubits")]
    InvalidQubit { qubit: usize, n: usize },

    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    RepeatedQubit(usize),

    #[error("size mismatch: {left} vs {right} qubits")]
    SizeMismatch { left: usize, right: usize },

    #[error("observable is not Hermitian (phase i^{0})")]
    NonHermitian(u8),

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("cannot parse Pauli string: {0}")]
    Parse(String),

    #[error("invalid Bell operator: {0}")]
    InvalidOperator(String),

    #[error("term index {index} out of range (M = {m})")]
    TermIndex { index: u128, m: u128 },

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("no violation margin: {0}")]
    NoMargin(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown device preset `{0}`")]
    UnknownDevice(String),

    #[error("no simple path with {wanted} vertices found (longest usable: {found})")]
    PathNotFound { wanted: usize, found: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

impl Error {
    /// True for the planning failures that mean "there is nothing to certify",
    /// as opposed to malformed input.
    pub fn is_no_margin(&self) -> bool {
        matches!(self, Error::NoMargin(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
