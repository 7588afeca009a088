//! Command-line driver: argument and config parsing, the subcommands, and
//! JSON/CSV rendering of their results.

pub mod commands;
pub mod input;
pub mod output;
pub mod parse;

use preper_core::error::DynError;
use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input or invalid options; exit status 1.
    #[error("{0}")]
    Parse(String),
    /// The computation itself failed; exit status 2.
    #[error(transparent)]
    Compute(#[from] DynError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Compute(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<preper_algebra::AlgebraError> for CliError {
    fn from(e: preper_algebra::AlgebraError) -> Self {
        CliError::Compute(e.into())
    }
}
