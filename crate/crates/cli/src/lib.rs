//! Command-line front end for gamma entropy estimation.

pub mod commands;
pub mod error;
pub mod ingest;
pub mod output;
pub mod study_config;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
