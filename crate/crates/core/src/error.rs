use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("input vectors are linearly dependent (vector {0})")]
    DependentInput(usize),
    #[error("zero vector has no Schmidt rank")]
    ZeroVector,
    #[error("local dimension must be at least 3, got {0}")]
    InvalidDimension(usize),
    #[error("layer {layer} out of range 1..={max} for d={d}")]
    LayerOutOfRange { d: usize, layer: usize, max: usize },
    #[error("states {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
