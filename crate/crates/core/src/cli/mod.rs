//! Command-line front end: `validate`, `run <study>` and `report`.

mod commands;
mod config;

pub use commands::{
    cmd_report, cmd_run, cmd_validate, run_cli, write_outcome, Cli, Command, EXIT_FAILED, EXIT_OK, EXIT_RUNTIME,
    EXIT_USAGE,
};
pub use config::{StudyConfig, DEFAULT_CONFIG};
