use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use websym_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
