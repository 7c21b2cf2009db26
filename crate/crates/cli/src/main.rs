use std::io::Write;
use std::process::ExitCode;

use aoi_cli::{run, Cli, CliError, EXIT_STATISTICAL, EXIT_USAGE};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let text = outcome.record.render(cli.format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed: |z| > {}", aoi_cli::Z_GATE);
        ExitCode::from(EXIT_STATISTICAL)
    }
}
