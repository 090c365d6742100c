//! Library side of the `logsphere` binary: argument definitions, artifact
//! formats, run configurations and the identity self-tests.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod selftest;

pub use config::{LatticeInput, RunConfig};
pub use error::{CliError, CliResult};
