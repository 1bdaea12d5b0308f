//! Command-line front end for `bragg-entanglement`: JSON run configs,
//! subcommands for each computation, CSV and JSON output.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod record;

pub use app::{run, Cli};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use record::ResultRecord;
