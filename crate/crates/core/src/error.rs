use std::io;

use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// The variants map onto the command-line exit codes: [`Error::Usage`] is a
/// caller mistake (exit 1), everything else is a data, parse or I/O failure
/// (exit 2).
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("data error{}: {message}", line_suffix(*.line))]
    Data { line: Option<usize>, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

fn line_suffix(line: Option<usize>) -> String {
    match line {
        Some(n) => format!(" at line {n}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Error::Usage(message.into())
    }

    pub(crate) fn data(message: impl Into<String>) -> Self {
        Error::Data {
            line: None,
            message: message.into(),
        }
    }

    pub(crate) fn data_at(line: usize, message: impl Into<String>) -> Self {
        Error::Data {
            line: Some(line),
            message: message.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
