//! Command-line front end: configuration, table output and self-validation.

pub mod args;
pub mod commands;
pub mod config;
mod error;
pub mod validate;

pub use error::CliError;
