//! File formats and subcommands of the `homnov` tool.

pub mod commands;
pub mod report;
pub mod spec;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("malformed spec file: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Core(#[from] homnov_core::Error),

    #[error("{0}")]
    Input(String),
}
