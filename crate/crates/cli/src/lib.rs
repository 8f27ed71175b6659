//! Command-line front end for the soliton laboratory: JSON run
//! configuration, plot-ready CSV/JSON outputs, and the five subcommands
//! (`simulate`, `soliton-check`, `spectrum`, `photons`, `lax-check`).
//!
//! Exit-code contract: 0 on success, 2 for configuration or input errors,
//! 3 for numerical failures (blow-up mid-run).

pub mod commands;
pub mod config;
pub mod io;

use std::fmt;

/// Error carrying the process exit code.
#[derive(Debug)]
pub enum CmdError {
    /// Bad configuration, unreadable input, or invalid parameters (exit 2).
    Config(String),
    /// Numerical failure during a run (exit 3).
    Numeric(String),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Config(_) => 2,
            CmdError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Config(msg) => write!(f, "config error: {msg}"),
            CmdError::Numeric(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl From<nlse_core::Error> for CmdError {
    fn from(e: nlse_core::Error) -> Self {
        match e {
            nlse_core::Error::Blowup { .. } => CmdError::Numeric(e.to_string()),
            other => CmdError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Config(e.to_string())
    }
}

impl From<serde_json::Error> for CmdError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json reports line/column in its Display output.
        CmdError::Config(e.to_string())
    }
}

pub type CmdResult<T> = Result<T, CmdError>;
