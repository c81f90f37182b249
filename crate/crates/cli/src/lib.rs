//! Command-line front end: every pipeline of `poncelet-core` as a
//! reproducible experiment writing CSV or JSON.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, EXIT_CHECK, EXIT_CONFIG};
