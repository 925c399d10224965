mod args;
mod batch;
mod config;
mod output;
mod stats;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failures mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration: exit 3.
    Usage(String),
    /// Unreadable or undecodable input: exit 2.
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 3 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => batch::run_analyze(a),
        Command::Batch(b) => batch::run_batch(b),
        Command::Stats(s) => stats::run_stats(s),
        Command::Headers(h) => stats::run_headers(h),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("mixqa: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
