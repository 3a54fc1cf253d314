//! Command-line front end: system files, reports and subcommands.

pub mod commands;
pub mod report;
pub mod system_file;

pub use commands::{execute, Execution};
pub use system_file::{emit_system, parse_system, parse_system_str, InputError, ParsedSystem};
