use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use ccgnf::cli::{main_with_args, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    let report = main_with_args(&args);
    let _ = std::io::stdout().write_all(report.stdout.as_bytes());
    let _ = std::io::stderr().write_all(report.stderr.as_bytes());
    ExitCode::from(report.exit_code as u8)
}
