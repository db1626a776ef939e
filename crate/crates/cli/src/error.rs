use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const VALIDATION: u8 = 2;
    pub const PRECONDITION: u8 = 3;
    pub const DEGENERATE: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}:{column}: at `{field}`: {message}", path.display())]
    Parse {
        path: PathBuf,
        field: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input at `{field}`: {message}")]
    Invalid { field: String, message: String },

    #[error("malformed table on line {line}: {message}")]
    Table { line: usize, message: String },

    #[error(transparent)]
    Core(#[from] toric_core::Error),
}

impl CliError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => core_exit_code(e),
            CliError::Table { .. } => exit::FAILURE,
            _ => exit::VALIDATION,
        }
    }
}

/// Maps a library error onto the documented exit codes.
pub fn core_exit_code(e: &toric_core::Error) -> u8 {
    use toric_core::Error::*;
    match e {
        NoFineInterior | DegenerateSupport | NotARoot(_) => exit::PRECONDITION,
        DegenerateCoefficients { .. } => exit::DEGENERATE,
        HeightMismatch { .. } => exit::FAILURE,
        _ => exit::VALIDATION,
    }
}
