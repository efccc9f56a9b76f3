use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("symbol {symbol} is not in an alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("alphabet mismatch: expected size {expected}, found {found}")]
    AlphabetMismatch { expected: usize, found: usize },

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("letter {seed} is not prolongable: its image does not start with it")]
    NonProlongable { seed: usize },

    #[error("matrix is not primitive")]
    NotPrimitive,

    #[error("dominant eigenvalue {eigenvalue} is not expanding")]
    NonExpanding { eigenvalue: f64 },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
