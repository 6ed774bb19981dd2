use std::path::PathBuf;

use thiserror::Error;

use crate::algebra::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar {input:?} at position {position}: {message}")]
pub struct ParseScalarError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error(transparent)]
    Scalar(#[from] ParseScalarError),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("spec parse error at line {line}, column {column}: {message}")]
    SpecSyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid spec: {0}")]
    SpecContent(String),

    #[error("algebra fails validation:\n{0}")]
    Invalid(Box<ValidationReport>),

    #[error("unknown algebra {0:?}: not a catalog name or readable file")]
    UnknownAlgebra(String),

    #[error("missing fixture for {name}: looked for {}", .path.display())]
    MissingFixture { name: String, path: PathBuf },

    #[error("parameter error: {0}")]
    Param(String),

    #[error("map is not a quasiderivation: no associated map exists")]
    NotQuasiDerivation,

    #[error("invalid quasiderivation pair: {0}")]
    InvalidPair(String),

    #[error("subspaces are not complementary: {0}")]
    NotComplement(String),

    #[error("io error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
