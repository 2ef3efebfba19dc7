use std::process::ExitCode;

use clap::Parser;
use halton_subseq_cli::{execute, Cli};

fn main() -> ExitCode {
    ExitCode::from(execute(&Cli::parse()))
}
