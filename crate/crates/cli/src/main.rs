mod args;
mod catalog;
mod commands;
mod error;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
  match cli.command {
    Command::ValidateComplex { complex } => commands::validate_complex(&complex),
    Command::ValidateTwisting { algebra, all_witnesses } => commands::validate_twisting(&algebra, all_witnesses),
    Command::Compute { complex, algebra, run } => commands::compute(&complex, &algebra, &run).map(drop),
    Command::Fuzz { complex, algebra, run, steps, trials, seed } => {
      commands::fuzz(&complex, &algebra, &run, steps, trials, seed).map(drop)
    }
    Command::Examples { name, out } => commands::examples(name.as_deref(), &out),
  }
}

fn main() -> ExitCode {
  let cli = match Cli::try_parse() {
    Ok(cli) => cli,
    Err(e) => {
      let _ = e.print();
      return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
    }
  };
  match run(cli) {
    Ok(()) => ExitCode::SUCCESS,
    Err(e) => {
      eprintln!("error: {e}");
      ExitCode::from(e.exit_code() as u8)
    }
  }
}
