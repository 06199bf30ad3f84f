//! Std companion to `gmc-core`: spec-string parsing, JSON vector files, run
//! configuration, CSV tables, the property suites and the `gmc` command line.

pub mod commands;
pub mod config;
pub mod format;
pub mod spec;
pub mod suites;
pub mod table;

pub use config::{Group, RunConfig};
pub use suites::{Check, Context, Suite};
pub use table::{Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot parse `{token}`: {message}")]
    Parse { token: String, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Precondition(String),

    #[error(transparent)]
    Core(#[from] gmc_core::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Usage, parse and precondition errors all map to 2; property failures
    /// (exit 1) are reported by suites, not as errors.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
