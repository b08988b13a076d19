//! One module per subcommand.

mod audit;
mod dispersion;
mod fit;
mod simulate;
mod spectrum;

use std::collections::BTreeMap;
use std::path::Path;

use crate::args::{Command, OversampleArg};
use crate::error::{CliError, Result};
use crate::manifest::RunManifest;

pub fn dispatch(command: Command, argv: &[String]) -> Result<()> {
    match command {
        Command::Simulate(a) => simulate::run(&a, argv),
        Command::Spectrum(a) => spectrum::run(&a, argv),
        Command::Fit(a) => fit::run(&a, argv),
        Command::Dispersion(a) => dispersion::run(&a, argv),
        Command::Audit(a) => audit::run(&a, argv),
        Command::Replay(a) => {
            let m = RunManifest::read(&a.manifest)?;
            if m.command == "replay" {
                return Err(CliError::Usage("a manifest cannot record a replay".into()));
            }
            log::info!("replaying '{}' from {}", m.command, a.manifest.display());
            crate::run(&m.argv)
        }
    }
}

pub(crate) fn oversampling(arg: OversampleArg) -> matern::simulate::Oversampling {
    match arg {
        OversampleArg::Auto => matern::simulate::Oversampling::Auto,
        OversampleArg::Fixed(k) => matern::simulate::Oversampling::Fixed(k),
    }
}

/// Parses "key=value,key=value" into numbers.
pub(crate) fn parse_assignments(flag: &str, text: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--{flag}: expected key=value, got '{item}'")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--{flag}: '{}' is not a number", v.trim())))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(CliError::Usage(format!("--{flag}: '{}' given twice", k.trim())));
        }
    }
    Ok(out)
}

/// Parses one or two comma-separated numbers.
pub(crate) fn parse_numbers(flag: &str, text: &str, min: usize, max: usize) -> Result<Vec<f64>> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("--{flag}: expected comma-separated numbers, got '{text}'")))?;
    if values.len() < min || values.len() > max {
        return Err(CliError::Usage(format!(
            "--{flag}: expected {min} to {max} numbers, got {}",
            values.len()
        )));
    }
    Ok(values)
}

pub(crate) fn path_string(p: &Path) -> String {
    p.display().to_string()
}

pub(crate) fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    use std::io::Write;
    let err = |e: &dyn std::fmt::Display| crate::error::io_error(path, e);
    let mut w = crate::csvio::create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| err(&e))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| err(&e))
}
