//! `momentspace`: command-line access to moment-space geometry, rate
//! functions and the experiment harness.
//!
//! Exit codes: 0 success, 1 an experiment's hard check failed or I/O
//! failed, 2 malformed input, 3 a mathematical domain error (for example a
//! point outside the moment space).

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use momentspace::Error;

use args::Cli;

fn exit_code(e: &Error) -> u8 {
    if e.is_malformed_input() || matches!(e, Error::WrongMode { .. }) {
        2
    } else if matches!(e, Error::Io(_)) {
        1
    } else {
        3
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(outcome) => ExitCode::from(outcome),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
