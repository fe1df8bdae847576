use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("conllu line {line}: {message}")]
    Conllu { line: usize, message: String },

    #[error("conllu sentence ending at line {line}: {message}")]
    Structure { line: usize, message: String },

    #[error("stratification error: {0}")]
    Stratification(String),

    #[error("schema hash mismatch: expected {expected:016x}, found {found:016x}")]
    SchemaMismatch { expected: u64, found: u64 },

    #[error("format error: {0}")]
    Format(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("cannot fit: {0}")]
    Fit(String),

    #[error("training diverged at epoch {epoch}: {message}")]
    Diverged { epoch: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
