//! Experiment driver for the thetaflow solver: configuration files, runs,
//! parameter sweeps and invariant checks, with CSV output.

pub mod commands;
pub mod config;
pub mod error;

pub use config::RunConfig;
pub use error::{CliError, Result};

/// Process exit status of a subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Configuration error or a failed invariant.
    Invalid,
    /// Numerical blowup.
    Blowup,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Invalid => 1,
            Status::Blowup => 2,
        }
    }
}
