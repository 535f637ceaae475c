//! Command-line front end for `symrig-core`: spec files, report writers, the
//! subcommands and the reproduction suite.

pub mod cli;
pub mod commands;
pub mod defaults;
pub mod error;
pub mod repro;
pub mod report;
pub mod spec_file;

pub use commands::{resolve_limits, run, Outcome};
pub use error::{CliError, CliResult};
