use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use phwalk::{run, Cli, CliError};

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(&cli).and_then(|text| emit(&cli, &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::GateFailed(report)) => {
            let code = CliError::GateFailed(String::new()).exit_code();
            if let Err(e) = emit(&cli, &report) {
                eprintln!("phwalk: {e}");
                return ExitCode::from(e.exit_code());
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("phwalk: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
