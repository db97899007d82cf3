//! Command-line front end: file formats, SVG rendering and commands.

pub mod commands;
pub mod error;
pub mod formats;
pub mod svg;

pub use commands::{run, Cli, Command};
pub use error::{CliError, ParseError, Result};
