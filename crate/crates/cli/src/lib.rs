//! Command implementations for the `oscillab` binary.

pub mod config;
pub mod error;
pub mod output;
pub mod simulate;
pub mod spectrum;
pub mod suites;

pub use error::CliError;
