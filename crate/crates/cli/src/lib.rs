//! Command-line front end for the proximity-resonance models: config
//! loading, CSV tables and the run manifest.

pub mod commands;
pub mod config;
mod error;
pub mod ini;
pub mod output;

pub use commands::{build, run, Command, CommandOutput, RunReport};
pub use config::RunConfig;
pub use error::CliError;
