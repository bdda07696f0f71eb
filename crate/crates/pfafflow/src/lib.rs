//! Command-line front end for `pfafflow-core`: configuration, JSON/table
//! reports and the built-in self test.

pub mod cli;
pub mod config;
pub mod render;
pub mod selftest;

pub use cli::{run, MatrixFile};
pub use config::{Format, RunConfig};

/// Malformed input or inconsistent options.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

/// Why a command did not produce a clean result.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Usage(UsageError),
    Identity(String),
}
