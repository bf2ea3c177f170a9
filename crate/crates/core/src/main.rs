use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use profound::cli::{execute, Cli, Report};

fn emit(report: &Report, out: Option<&std::path::Path>) -> ExitCode {
    if let Some(e) = &report.error {
        eprintln!("profound: {e}");
    }
    for v in report.verdicts.iter().filter(|v| !v.pass) {
        eprintln!("profound: check {} failed", v.check);
    }
    let text = report.to_json();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("profound: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code as u8)
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => emit(&execute(&cli), cli.out.as_deref()),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(_) => emit(&profound::cli::run(std::env::args_os()), None),
    }
}
