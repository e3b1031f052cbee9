//! `mscount`: count models of CNF formulas by enumerating monotone
//! sub-formulae, generate random instances, inflate formulas, validate
//! engines against each other, and run benchmark sweeps.
//!
//! Exit codes: 0 success, 1 input or parse error, 2 internal-consistency
//! failure (the counting identity left its valid range on an exact
//! engine), 3 engine disagreement found by `validate`.
//!
//! Everything contractual goes to stdout; timing and progress go to
//! stderr, so stdout is byte-identical across reruns with equal flags.

mod commands;
mod report;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{Cli, CliError};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            std::process::exit(0);
        }
        Err(err) => {
            eprint!("{err}");
            std::process::exit(1);
        }
    };

    match commands::run(cli) {
        Ok(()) => {}
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            std::process::exit(code);
        }
    }
}
