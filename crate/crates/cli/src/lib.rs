//! Command-line front end for the W-state broadcasting simulation.
//!
//! The library half holds config parsing, report assembly and the
//! printed-formula fixtures so that tests can drive each subcommand
//! without spawning the binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod json;

pub use commands::{cmd_fixtures, cmd_run, cmd_sweep, cmd_verify};
pub use config::{ProtocolConfig, SweepSpec, Validated};
pub use error::{CliError, Result};

/// Pretty JSON with a trailing newline. Field order follows the struct
/// definitions, so equal inputs give byte-identical text.
pub fn to_json_text<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
