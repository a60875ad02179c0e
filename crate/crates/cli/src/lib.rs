//! Library side of the `arborist` command: graph files, tree records and
//! the subcommand implementations.

pub mod commands;
mod error;
pub mod graph_io;

pub use error::CliError;
