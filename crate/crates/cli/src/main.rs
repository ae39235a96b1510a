//! `xsect`: verifiers, shifting, exchange and searches over intersecting
//! families from the command line.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::error_code(&err) as u8)
        }
    }
}
