//! Command-line front end for the partial-evaluation engine: JSON input
//! formats, renderers, and the subcommands behind the `pevkit` binary.

pub mod commands;
pub mod format;
pub mod render;

pub use commands::{run, CliError, Command, Fault, JobConfig, Outcome, OutputFormat};
