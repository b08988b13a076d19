//! Command-line front end for the `matern` library.

pub mod args;
pub mod commands;
pub mod csvio;
pub mod error;
pub mod manifest;

use clap::Parser;

pub use error::{CliError, Result};

/// Parses and runs one command. `argv` excludes the program name.
pub fn run<S: AsRef<str>>(argv: &[S]) -> Result<()> {
    let argv: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = match args::Cli::try_parse_from(std::iter::once("matern".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return Ok(());
        }
        Err(e) => {
            let text = e.render().to_string();
            let text = text.strip_prefix("error: ").unwrap_or(&text);
            return Err(CliError::Usage(text.trim_end().to_string()));
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", cli.jobs)))?;
    pool.install(|| commands::dispatch(cli.command, &argv))
}
