//! Command-line front end for [`annulus_spectra`]: radial and planar solves,
//! parameter sweeps, numerical checks and plot data.
//!
//! Results are [`record::ResultRecord`]s written as JSON with every float at
//! 17 significant digits, so reruns of the same config are byte-identical
//! (given a fixed `SOURCE_DATE_EPOCH`). Records are cached by the SHA-256 of
//! the canonical config.

pub mod args;
pub mod config;
pub mod output;
pub mod record;
mod run;

pub use run::{classify, compute, run, run_cli, sweep, Env};

pub const EXIT_OK: i32 = 0;
/// A check failed; its report is still written.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// Invalid configuration or input files.
    #[error("{0}")]
    Config(String),
    /// A solver did not converge.
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
}
