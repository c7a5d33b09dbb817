//! Command-line front end: `simulate`, `crossing`, `sweep` and `verify`.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a tolerance breach,
//! 2 for usage errors, invalid parameters and I/O failures.

pub mod args;
mod commands;
pub mod config;
pub mod output;

pub use args::{Cli, Command, CommonArgs, VerifyArgs};
pub use commands::{configure_threads, run, THREADS_ENV};
pub use config::{AxisSpec, Family, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("cannot write {path}: {reason}")]
    Io { path: String, reason: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}
