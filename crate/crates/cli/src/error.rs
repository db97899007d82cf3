use std::path::PathBuf;

use bead_tsp::experiments::SweepError;
use thiserror::Error;

/// A malformed line in an input file. Line 0 refers to the whole file.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}{msg}", if *.line > 0 { format!("line {}: ", .line) } else { String::new() })]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, msg: impl Into<String>) -> Self {
        Self {
            line,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}: {source}", .path.display())]
    Parse { path: PathBuf, source: ParseError },

    #[error(transparent)]
    Core(#[from] bead_tsp::Error),

    #[error(transparent)]
    Sweep(#[from] SweepError),

    #[error("tour failed validation: {0}")]
    Invalid(String),
}

impl CliError {
    /// Process exit status: 1 for usage errors, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
