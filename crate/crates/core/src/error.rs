use thiserror::Error;

/// Errors raised by hypergraph construction, parsing and the procedures built on top.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for hypergraph on {n} vertices")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("edge must have at least 2 distinct vertices, got {0:?}")]
    EdgeTooSmall(Vec<u32>),

    #[error("repeated vertex {0} in tuple or edge")]
    RepeatedVertex(u32),

    #[error("tuple has size {actual}, expected {expected}")]
    TupleSize { expected: usize, actual: usize },

    #[error("coloring has length {actual}, hypergraph has {expected} vertices")]
    ColoringLength { expected: usize, actual: usize },

    #[error("hypergraph is not {k}-uniform (found an edge of size {found})")]
    NotUniform { k: usize, found: usize },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("brute force refused: {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("reduction failed: {0}")]
    ReductionFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
