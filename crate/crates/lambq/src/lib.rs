//! Command-line front end for the bead-on-a-string quantum model.
//!
//! The numerics live in `lambq-core`; this crate adds configuration files,
//! deterministic CSV and JSON output, figure regeneration, a verification
//! suite, and parameter sweeps. All commands write 17-significant-digit
//! text, so rerunning a configuration reproduces its outputs byte for byte.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;
pub mod figures;
pub mod pipeline;
pub mod sweep;
pub mod verify;

pub use config::{Overrides, RunConfig};
pub use error::CliError;
pub use pipeline::{assemble, ModelInstance};
