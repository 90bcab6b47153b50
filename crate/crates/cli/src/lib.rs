//! The `stackelberg` command line: game files, solving, generation,
//! benchmark campaigns and reduction checks.

pub mod bench;
pub mod commands;
pub mod files;
pub mod run;

pub use commands::{Cli, CliError, Command};
