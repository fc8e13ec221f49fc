use thiserror::Error;

/// Errors raised across the crate. Row, column and symbol values carried by
/// variants are 1-based, matching every external interface.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid is not square: row {row} has {len} entries, expected {order}")]
    NotSquare {
        order: usize,
        row: usize,
        len: usize,
    },
    #[error("symbol {symbol} at ({row},{col}) is outside 1..={order}")]
    SymbolOutOfRange {
        row: usize,
        col: usize,
        symbol: usize,
        order: usize,
    },
    #[error("row {0} repeats symbol {1}")]
    RowRepeat(usize, usize),
    #[error("column {0} repeats symbol {1}")]
    ColumnRepeat(usize, usize),
    #[error("order {order} is too small (minimum {min})")]
    OrderTooSmall { order: usize, min: usize },
    #[error("order {order} exceeds the limit {max} for this operation")]
    OrderTooLarge { order: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid orthogonal array: {0}")]
    InvalidOa(String),
    #[error("{0} is not a permutation")]
    NotAPermutation(&'static str),
    #[error("cell ({row},{col}) is outside a square of order {order}")]
    CellOutOfRange {
        row: usize,
        col: usize,
        order: usize,
    },
    #[error("input is not a valid {expected}: {reason}")]
    InvalidInputPlex { expected: String, reason: String },
    #[error("invalid partial transversal: {0}")]
    InvalidPartial(String),
    #[error("block structure mismatch: {0}")]
    StructureMismatch(String),
    #[error("constructed set failed validation: {0}")]
    ValidationFailure(String),
    #[error("not constructible: {0}")]
    NotConstructible(String),
    #[error("no witness found: {0}")]
    NoWitnessFound(String),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("too many candidate sets ({count}, limit {limit})")]
    TooManyCandidates { count: usize, limit: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
