//! Command-line front end of the `ewl` library.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use args::{Cli, Command};
use error::CliResult;
use report::Emitted;

/// Runs one parsed command without touching stdout or the file system.
pub fn execute(cli: &Cli) -> CliResult<Emitted> {
    match &cli.command {
        Command::Classify(a) => commands::cmd_classify(a),
        Command::Sweep(a) => commands::cmd_sweep(a),
        Command::VerifyAsymptotics(a) => commands::cmd_verify(a),
        Command::Simulate(a) => commands::cmd_simulate(a),
        Command::Exponents(a) => commands::cmd_exponents(a),
    }
}
