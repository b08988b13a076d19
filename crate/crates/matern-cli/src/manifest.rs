//! Run manifests written next to every output.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{io_error, CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub tool_version: String,
    pub timestamp: String,
    pub seed: Option<u64>,
    /// Arguments after the program name; `matern replay` re-runs them.
    pub argv: Vec<String>,
    pub parameters: Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// Command-specific results (diffusivity, jitter, warnings, ...).
    pub results: Value,
}

impl RunManifest {
    pub fn new(command: &str, argv: &[String], parameters: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            seed: None,
            argv: argv.to_vec(),
            parameters,
            inputs: Vec::new(),
            outputs: Vec::new(),
            results: Value::Object(Default::default()),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = crate::csvio::create(path)?;
        serde_json::to_writer_pretty(&mut w, self).map_err(|e| io_error(path, e))?;
        writeln!(w).and_then(|_| w.flush()).map_err(|e| io_error(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let m: Self = serde_json::from_str(&text).map_err(|e| io_error(path, e))?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(CliError::Data(format!(
                "{}: manifest schema {} is not supported (expected {SCHEMA_VERSION})",
                path.display(),
                m.schema_version
            )));
        }
        Ok(m)
    }
}

/// `dir/stem.ext` → `dir/stem.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    output.with_file_name(format!("{stem}.manifest.json"))
}
