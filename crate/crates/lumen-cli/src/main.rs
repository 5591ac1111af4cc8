//! `lumen`: train, evaluate, and apply influence-cue models from the shell.
//!
//! Exit codes: 0 success, 1 usage error, 2 data/model error. All randomness
//! is pinned by `--seed`; rerunning a command with identical inputs and seed
//! writes byte-identical outputs.

mod opts;
mod run;

use clap::error::ErrorKind;
use clap::Parser;
use std::process::ExitCode;

use opts::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match run::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
