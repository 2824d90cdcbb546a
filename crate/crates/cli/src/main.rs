use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod exit;

use args::{Cli, Command};
use exit::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    let out_dir = cli.out_dir.as_deref();
    match cli.command {
        Command::Build(a) => commands::build(a, out_dir),
        Command::Evaluate(a) => commands::evaluate(a, out_dir),
        Command::Sweep(a) => commands::sweep(a, out_dir),
        Command::Boundary(a) => commands::boundary(a, out_dir),
        Command::Simulate(a) => commands::simulate(a, out_dir),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::BAD_INPUT
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
