use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Qubit counts, tensor dimensions or oracle caps out of range.
    #[error("size error: {0}")]
    Size(String),
    #[error("wiring error: {0}")]
    Wiring(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("state error: {0}")]
    State(String),
    #[error("index out of bounds: {0}")]
    Bounds(String),
    #[error("graph error: {0}")]
    Graph(String),
    #[error("degenerate system: {0}")]
    DegenerateSystem(String),
    /// Tree node with no permitted action and no placeholder to fall back on.
    #[error("dead end at prefix {0:?}")]
    DeadEnd(Vec<usize>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
