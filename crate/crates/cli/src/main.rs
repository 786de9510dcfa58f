use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use hi_spectra_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let write = match &cli.global.out {
        Some(path) => std::fs::write(path, &outcome.output).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => std::io::stdout().write_all(outcome.output.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    };
    if let Err(e) = write {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if !outcome.summary.is_empty() {
        eprintln!("{}", outcome.summary);
    }
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    ExitCode::from(outcome.code)
}
