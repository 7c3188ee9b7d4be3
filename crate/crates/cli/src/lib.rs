//! Command-line front end for [`wilfpoly`].
//!
//! Exit codes: 0 success, 1 a verification did not hold, 2 usage error, 3 computational
//! failure (precision exhausted, unsupported scale, I/O).

pub mod args;
pub mod cache;
pub mod commands;
pub mod report;

pub use args::Cli;
pub use commands::{run, CliError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;
