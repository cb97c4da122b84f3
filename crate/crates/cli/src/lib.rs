//! Command-line front end: configuration layering, output encodings and
//! figure presets on top of `squo-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod output;

pub use commands::{parse, run, Cli, Command, Parsed};
pub use config::RunConfig;
pub use error::CliError;
