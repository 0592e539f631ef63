//! Config-driven runner for two- and three-time Leggett-Garg experiments.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod runner;

pub use commands::{execute, Cli, Command};
pub use error::{CliError, CliResult};
