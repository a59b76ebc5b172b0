//! Error type shared by every module in the crate.

use std::io;

/// Errors produced by analysis and ingestion operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A probability hit a boundary that the model rejects outright
    /// (Cromwell's rule: no prior or likelihood of exactly 0 or 1).
    #[error("domain error: {0}")]
    Domain(String),

    /// A game-history row failed to parse. `row` is the 1-based data row
    /// number (the header is row 0).
    #[error("row {row}, column '{column}': {message}")]
    CsvRow {
        row: usize,
        column: String,
        message: String,
    },

    /// The history file contained no data rows.
    #[error("empty history: file has no game rows")]
    EmptyHistory,

    #[error("io error: {0}")]
    Io(#[from] io::Error),

    /// An internal computation produced a non-finite or inconsistent value.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
