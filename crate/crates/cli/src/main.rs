use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = cdg::Cli::parse();
    match cdg::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cdg: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
