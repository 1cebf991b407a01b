//! File formats, sweeps and the command-line front end for `bimetro-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod input;
pub mod verify;

pub use error::{CliError, Result};
