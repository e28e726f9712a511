mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("enumeration guard exceeded: {0}")]
    Guard(String),
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<skewcodes::Error> for CliError {
    fn from(e: skewcodes::Error) -> Self {
        match e {
            skewcodes::Error::TooLarge { .. } => CliError::Guard(e.to_string()),
            skewcodes::Error::NotFound { .. } => CliError::Mismatch(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) | CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout().lock();
    match commands::run(&cli.command, stdout) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("skewcodes: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
