use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use zenosim_cli::config::{resolve_experiment, Cli, CliError};
use zenosim_cli::run::execute;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let experiment = match resolve_experiment(cli.command) {
        Ok(experiment) => experiment,
        Err(error) => {
            eprintln!("error: {error}");
            return ExitCode::from(2);
        }
    };
    let table = match execute(&experiment) {
        Ok(table) => table,
        Err(error) => {
            eprintln!("error: {error}");
            return ExitCode::from(2);
        }
    };
    let csv = table.to_csv();
    match &experiment.common.output {
        None => {
            if let Err(error) = std::io::stdout().write_all(csv.as_bytes()) {
                eprintln!("error: stdout: {error}");
                return ExitCode::FAILURE;
            }
        }
        Some(path) => {
            if let Err(error) = write_atomically(path, csv.as_bytes()) {
                eprintln!("error: {error}");
                return ExitCode::FAILURE;
            }
        }
    }
    ExitCode::SUCCESS
}

/// Writes through a sibling temp file and renames, so the target path never
/// holds a partial table; the temp file is removed on any failure.
fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_else(|| "output".into());
    name.push(".tmp");
    let tmp = path.with_file_name(name);
    let io_error = |source: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Err(error) = std::fs::write(&tmp, bytes) {
        let _ = std::fs::remove_file(&tmp);
        return Err(io_error(error));
    }
    if let Err(error) = std::fs::rename(&tmp, path) {
        let _ = std::fs::remove_file(&tmp);
        return Err(io_error(error));
    }
    Ok(())
}
