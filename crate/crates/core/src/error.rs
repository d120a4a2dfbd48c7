use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration is degenerate: all landmarks coincide")]
    DegenerateConfiguration,

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point ({u}, {v}) lies outside the unit disk")]
    OutOfDisk { u: f64, v: f64 },

    #[error("cosine in-betweenness is undefined when side a or c has zero length")]
    UndefinedCosineIbi,

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("insufficient replicates: {found} usable, at least {required} needed")]
    InsufficientReplicates { found: usize, required: usize },

    #[error("pooled covariance is singular or ill-conditioned (condition number {condition:e})")]
    SingularCovariance { condition: f64 },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("parse error at row {row}, column '{column}': {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("unknown group label '{0}'")]
    UnknownGroupLabel(String),

    #[error("expected three groups, found {found}")]
    FewerThanThreeGroups { found: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::InvalidParameter(_) => 2,
            Error::FileNotFound(_) | Error::Io(_) => 3,
            Error::Parse { .. }
            | Error::UnknownGroupLabel(_)
            | Error::FewerThanThreeGroups { .. }
            | Error::InvalidDataset(_) => 4,
            Error::DegenerateConfiguration
            | Error::InvalidConfiguration(_)
            | Error::DimensionMismatch { .. }
            | Error::OutOfDisk { .. }
            | Error::UndefinedCosineIbi
            | Error::DomainError(_) => 5,
            Error::InsufficientData(_)
            | Error::InsufficientReplicates { .. }
            | Error::SingularCovariance { .. } => 6,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
