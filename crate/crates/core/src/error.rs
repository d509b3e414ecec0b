use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid angle triple: {0}")]
    InvalidTriple(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a solution of the vertex identity: {0}")]
    NotAVertexSolution(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(String),

    /// A search came back empty where a proved statement guarantees a hit,
    /// or two decision paths contradicted each other.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
