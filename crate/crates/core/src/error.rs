use thiserror::Error;

use crate::types::Code;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A pipeline invariant was broken (label mismatch, missing shuffle tag, ...).
    #[error("internal invariant violated: {0}")]
    Structural(String),

    #[error("value {code} of {feature} is outside its declared domain")]
    DomainViolation { code: Code, feature: String },

    #[error("line {line}: {message}")]
    Ingestion { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("unsupported data: {0}")]
    UnsupportedData(String),

    #[error("contingency table has no observations")]
    EmptyTable,

    #[error("map task failed on partition {partition}, record {record}: {source}")]
    Map {
        partition: usize,
        record: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("reduce task failed for key {key}: {source}")]
    Reduce {
        key: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn structural(message: impl Into<String>) -> Self {
        Error::Structural(message.into())
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }

    /// True when the error signals a bug in the pipeline rather than bad input.
    pub fn is_internal(&self) -> bool {
        match self {
            Error::Structural(_) => true,
            Error::Map { source, .. } | Error::Reduce { source, .. } => source.is_internal(),
            _ => false,
        }
    }
}
