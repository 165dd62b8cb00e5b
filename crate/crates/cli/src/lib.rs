//! Library side of the `gmapper` command: configuration, graph export and
//! the subcommands themselves.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod export;

pub use error::CliError;
