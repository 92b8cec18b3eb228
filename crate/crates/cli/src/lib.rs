//! Command-line front end for the `dunkl-kg` library.

pub mod commands;
pub mod config;
pub mod error;
pub mod matrix;
pub mod table;

pub use config::{Cli, Command, RunConfig};
pub use error::CliError;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(cli.command.flags())?;
    match &cli.command {
        Command::Spectrum(_) => commands::cmd_spectrum(&cfg),
        Command::Density(_) => commands::cmd_density(&cfg),
        Command::Finestructure(_) => commands::cmd_finestructure(&cfg),
        Command::Verify(_) => commands::cmd_verify(&cfg),
    }
}
