//! Command-line error taxonomy and exit codes.
//!
//! Exit 0 is success. Exit 1 covers configuration problems and ordinary
//! runtime failures, exit 2 is reserved for the physical instability (the
//! Hamiltonian stopped being positive definite), and exit 3 means an
//! internal verification check failed, with the offending invariant named
//! in the message.

use thiserror::Error;

/// Everything a command can fail with.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration file is missing, malformed, or contradictory.
    #[error("config error: {0}")]
    Config(String),
    /// The model itself refused the parameters or the computation.
    #[error("{0}")]
    Model(#[from] lambq_core::Error),
    /// Filesystem trouble while writing results.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    /// An internal consistency check failed; the message names the
    /// invariant.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Model(err) => match err {
                lambq_core::Error::Instability { .. } => 2,
                _ => 1,
            },
            CliError::Verification(_) => 3,
        }
    }
}
