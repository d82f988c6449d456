//! Error type shared across the crate.

use thiserror::Error;

/// One failed layout task inside a batch sampling run.
#[derive(Debug)]
pub struct SampleFailure {
    pub graph_id: String,
    pub layout_index: usize,
    pub error: Box<Error>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty graph: {0}")]
    EmptyGraph(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("numeric degeneracy: {0}")]
    NumericDegeneracy(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("sampling failed for {} task(s): {}", .0.len(), format_failures(.0))]
    Sampling(Vec<SampleFailure>),
}

fn format_failures(failures: &[SampleFailure]) -> String {
    failures
        .iter()
        .map(|f| format!("{} layout {}: {}", f.graph_id, f.layout_index, f.error))
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    /// True if the error (or any inner failure) is a numeric degeneracy.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::NumericDegeneracy(_) => true,
            Error::Sampling(failures) => failures.iter().any(|f| f.error.is_numeric()),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
