//! Command-line front end for the ring-array massive MIMO rate models.
//!
//! The binary is a thin wrapper around [`app::run`]; everything here is
//! usable from tests without spawning a process.

pub mod app;
pub mod commands;
pub mod config;
pub mod record;
pub mod sweep;
pub mod validate;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Model(#[from] ringmimo::Error),
    #[error("{0}")]
    Usage(String),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{failed} of {total} acceptance criteria failed")]
    Acceptance { failed: usize, total: usize },
}

impl CliError {
    /// 1 for configuration and domain errors, 2 for acceptance failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Acceptance { .. } => 2,
            _ => 1,
        }
    }
}
