use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("series diverges: maximum cycle mean {lambda} is positive")]
    Divergent { lambda: f64 },

    #[error("invalid matrix entry at ({row}, {col}): {reason}")]
    InvalidEntry { row: usize, col: usize, reason: String },

    #[error("graph has no cycles")]
    Acyclic,

    #[error("cyclicity is undefined for an empty edge set")]
    EmptyEdgeSet,

    #[error("ensemble needs at least one generator")]
    EmptyEnsemble,

    #[error("generator {index} has size {found}, expected {expected}")]
    SizeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("generator {index} has no cycles, so its maximum cycle mean is undefined")]
    AcyclicGenerator { index: usize },

    #[error("word is empty")]
    EmptyWord,

    #[error("word letter {letter} at position {position} is out of range 1..={count}")]
    LetterOutOfRange {
        position: usize,
        letter: usize,
        count: usize,
    },

    #[error("cannot parse word: {0}")]
    WordSyntax(String),

    #[error("matrix powers did not become periodic with period {gamma} within {cap} steps")]
    PeriodicityCap { gamma: usize, cap: usize },

    #[error("lambda* = {lambda_star} is not negative")]
    NonNegativeLambdaStar { lambda_star: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("unknown counterexample family `{0}`")]
    UnknownFamily(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
