//! Configuration-driven experiments over the `fractalqm` library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod report;

use std::fmt;

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or usage: exit code 2.
    Usage(String),
    /// Numerical or I/O failure during a run: exit code 1.
    Numerical(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<fractalqm::Error> for CliError {
    fn from(e: fractalqm::Error) -> Self {
        use fractalqm::Error::*;
        match e {
            Domain(_)
            | ResourceLimit { .. }
            | DegenerateCurve(_)
            | Alignment { .. }
            | NotOnCurve { .. }
            | Mismatch(_)
            | Parse(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}
