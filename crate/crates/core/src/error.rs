use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown basis key {0}")]
    UnknownKey(String),

    #[error("indexing mismatch: {0}")]
    IndexingMismatch(String),

    #[error("truncation cap mismatch: {0} vs {1}")]
    CapMismatch(usize, usize),

    #[error("word of length {len} exceeds cap {cap}")]
    LengthOverflow { len: usize, cap: usize },

    #[error("invalid generator index {index} for genus {genus}")]
    InvalidGenerator { index: i32, genus: usize },

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource guard: {what} = {value} exceeds ceiling {ceiling}")]
    Resource { what: &'static str, value: usize, ceiling: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache format error: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
