//! Command-line front end and file formats for the `compacta` crate.

pub mod args;
mod commands;
pub mod error;
pub mod formats;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::PathsFile;
pub use error::CliError;
use output::{resolve, write_atomic, Status};

/// Runs one command and returns the process exit code: 0 on success, 1 when
/// a check finds a counterexample, 2 on usage, input or format errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(Status::Pass) => 0,
        Ok(Status::Fail) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cli: &args::Cli) -> Result<Status, CliError> {
    let outcome = commands::dispatch(&cli.command)?;
    let out = commands::out_path(&cli.command).map(|p| resolve(p, cli.out_dir.as_deref()));
    if let (Some(path), Some(artifact)) = (&out, &outcome.artifact) {
        write_atomic(path, artifact)?;
    }
    let stdout = if cli.json {
        let mut s = serde_json::to_string_pretty(&outcome.json).expect("serializable");
        s.push('\n');
        s
    } else {
        match (&out, outcome.artifact) {
            (None, Some(artifact)) => artifact,
            _ => outcome.text,
        }
    };
    let mut lock = std::io::stdout().lock();
    lock.write_all(stdout.as_bytes())
        .and_then(|_| lock.flush())
        .map_err(|source| CliError::Write {
            path: "stdout".into(),
            source,
        })?;
    Ok(outcome.status)
}
