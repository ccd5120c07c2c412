//! The `ilv` command set. Every command returns its output and exit code so
//! the binary stays a thin shell around these functions.

pub mod audit;
pub mod commands;
pub mod literal;
pub mod reproduce;

use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 1;
pub const EXIT_INFINITE: u8 = 2;
pub const EXIT_FAILURE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("size cap reached: {0}")]
    Cap(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(..) => EXIT_PARSE,
            CliError::Cap(_) => EXIT_INFINITE,
            CliError::Failed(_) => EXIT_FAILURE,
        }
    }
}

/// What a command prints and how it exits.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Output {
    pub fn ok(stdout: String) -> Self {
        Output {
            stdout,
            ..Output::default()
        }
    }
}
