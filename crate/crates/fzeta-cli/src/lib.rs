//! Command-line driver for the fractal zeta workspace.
//!
//! The binary front end (`fzeta`) is a thin shell over this library:
//! argument structures double as a serializable run description, every
//! subcommand is a plain function from that description to text output,
//! and the full verification suite is exposed both as the `report`
//! subcommand and as an integration test.
//!
//! Output is deterministic by construction.  The worker pool belongs to
//! this crate alone, parallel maps preserve index order, and floats are
//! printed with a fixed 17-significant-digit format, so a run
//! description reproduces its artifacts byte for byte at any thread
//! count.

pub mod acceptance;
pub mod commands;
pub mod output;
pub mod pool;
pub mod spec;
pub mod target;

use std::process::ExitCode;

pub use acceptance::{run_criterion, CriterionReport, CRITERIA};
pub use commands::{run, Outcome};
pub use spec::{Cli, Command, RunSpec};

/// Failures, split by who is at fault: bad invocations exit with 2,
/// genuine numerical or verification failures with 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn failed(msg: impl Into<String>) -> Self {
        CliError::Failed(msg.into())
    }

    /// Process exit code the error maps to.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

macro_rules! from_lib_error {
    ($($ty:ty),+) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Failed(e.to_string())
            }
        }
    )+};
}

from_lib_error!(
    fzeta_expr::ExprError,
    fzeta_moran::MoranError,
    fzeta_strings::StringError,
    fzeta_spray::SprayError,
    fzeta_tube::TubeError,
    fzeta_measure::MeasureError,
    fzeta_spectral::SpectralError
);
