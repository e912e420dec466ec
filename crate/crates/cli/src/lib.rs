//! Library half of the `hypermin` binary, split out so that integration tests can drive it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod sweep;
pub mod verify;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
