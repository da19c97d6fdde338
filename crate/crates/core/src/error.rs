use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("vertex {vertex} has zero degree; {variant} Laplacian is undefined")]
    DegenerateDegree { vertex: usize, variant: &'static str },
    #[error("graph is disconnected ({components} components); process components separately or opt in")]
    Disconnected { components: usize },
    #[error("{0} Laplacian is not symmetric; eigendecomposition unsupported")]
    UnsupportedVariant(&'static str),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("kernel undefined at {lambda}: {reason}")]
    Domain { lambda: f64, reason: String },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("band-pass kernel is not admissible: g(0) = {0}")]
    Admissibility(f64),
    #[error("signal is identically zero")]
    ZeroSignal,
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 for numeric failures, 1 for
    /// everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}
