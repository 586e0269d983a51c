use thiserror::Error;

use crate::poly::RootFailure;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexRange {
        line: usize,
        vertex: usize,
        n: usize,
    },

    #[error("invalid graph: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    /// The input lies outside the domain of the operation (for example a
    /// disconnected host graph handed to a spanning tree sampler).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("root certification failed: {}", .0.reason)]
    Certification(Box<RootFailure>),

    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status used by the command line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity(_) => 2,
            Error::Certification(_) | Error::Assertion(_) => 3,
            _ => 1,
        }
    }
}
