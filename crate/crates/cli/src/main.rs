use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use coxnet_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(report.table.to_csv().as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            if let Some(summary) = &report.summary {
                eprintln!("{summary}");
            }
            match report.failure {
                Some(err) => ExitCode::from(err.exit_code() as u8),
                None => ExitCode::SUCCESS,
            }
        }
        Err(err) => {
            eprintln!("coxnet: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
