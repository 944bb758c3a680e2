use std::process::ExitCode;

use catlab_cli::args::Cli;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = catlab_cli::configure_threads().and_then(|()| catlab_cli::run(&cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("catlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
