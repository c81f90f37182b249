use std::process::ExitCode;

use clap::Parser;

use poncelet_cli::{run, Cli, EXIT_CHECK};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK),
        Err(e) => {
            eprintln!("poncelet: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
