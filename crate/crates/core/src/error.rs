use crate::fields::Level;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("tower level mismatch: {0:?} vs {1:?}")]
    LevelMismatch(Level, Level),
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("unsupported tower: {0}")]
    BadTower(String),
    #[error("{ell} does not divide {order}")]
    NotADivisor { ell: u64, order: u64 },
    #[error("modulus is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("leading block is singular")]
    SingularLeadingBlock,
    #[error("block index {index} out of range 1..={ell}")]
    BlockOutOfRange { index: usize, ell: usize },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("Hankel block M is singular")]
    SingularM,
    #[error("twist scalar has nonzero trace")]
    TraceNonzero,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("enumeration of {size} items exceeds the limit of {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("invalid roots: {0}")]
    BadRoots(String),
    #[error("no admissible evaluation set after {scanned} candidates ({detail})")]
    NotFound { scanned: usize, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
