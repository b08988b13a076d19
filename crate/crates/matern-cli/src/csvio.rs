//! Long-format series files (`id,t,re,im`) and `%.17g` number formatting.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use matern::ComplexSeries;
use num_complex::Complex64;

use crate::error::{io_error, CliError, Result};

pub const SERIES_HEADER: [&str; 4] = ["id", "t", "re", "im"];

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros removed,
/// exponent form below 1e-4 or from 1e17 up.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (16 - exp) as usize, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Series keyed by id, in order of first appearance in the file.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub ids: Vec<String>,
    pub series: Vec<ComplexSeries>,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Common (length, dt), or a data error naming the first mismatch.
    pub fn common_shape(&self) -> Result<(usize, f64)> {
        let first = &self.series[0];
        for (id, s) in self.ids.iter().zip(&self.series) {
            if s.len() != first.len() || s.dt() != first.dt() {
                return Err(CliError::Data(format!(
                    "series '{id}' has {} samples at interval {}, but '{}' has {} at {}",
                    s.len(),
                    s.dt(),
                    self.ids[0],
                    first.len(),
                    first.dt()
                )));
            }
        }
        Ok((first.len(), first.dt()))
    }
}

struct Pending {
    id: String,
    t: Vec<f64>,
    z: Vec<Complex64>,
    first_line: u64,
}

pub fn read_series(path: &Path) -> Result<Ensemble> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| io_error(path, e))?;
    let header = reader.headers().map_err(|e| io_error(path, e))?.clone();
    if header.iter().map(str::trim).ne(SERIES_HEADER) {
        return Err(CliError::Data(format!(
            "{}:1: expected header 'id,t,re,im', found '{}'",
            path.display(),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut groups: Vec<Pending> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |what: &str| CliError::Data(format!("{}:{line}: {what}", path.display()));
        if record.len() != 4 {
            return Err(bad(&format!("expected 4 fields, found {}", record.len())));
        }
        let num = |i: usize, name: &str| -> Result<f64> {
            let v: f64 = record[i]
                .trim()
                .parse()
                .map_err(|_| bad(&format!("{name} '{}' is not a number", &record[i])))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad(&format!("{name} is not finite")))
            }
        };
        let (t, re, im) = (num(1, "t")?, num(2, "re")?, num(3, "im")?);
        let id = record[0].trim().to_string();
        let slot = *index.entry(id.clone()).or_insert_with(|| {
            groups.push(Pending {
                id,
                t: Vec::new(),
                z: Vec::new(),
                first_line: line,
            });
            groups.len() - 1
        });
        let g = &mut groups[slot];
        if let Some(&prev) = g.t.last() {
            if t <= prev {
                return Err(bad(&format!("time {t} does not increase within series '{}'", g.id)));
            }
        }
        g.t.push(t);
        g.z.push(Complex64::new(re, im));
    }
    if groups.is_empty() {
        return Err(CliError::Data(format!("{}: no data rows", path.display())));
    }
    let mut ids = Vec::with_capacity(groups.len());
    let mut series = Vec::with_capacity(groups.len());
    for g in groups {
        let dt = uniform_step(&g.t).ok_or_else(|| {
            CliError::Data(format!(
                "{}:{}: series '{}' needs at least 2 evenly spaced samples",
                path.display(),
                g.first_line,
                g.id
            ))
        })?;
        series.push(ComplexSeries::new(dt, g.z)?);
        ids.push(g.id);
    }
    Ok(Ensemble { ids, series })
}

fn uniform_step(t: &[f64]) -> Option<f64> {
    if t.len() < 2 {
        return None;
    }
    let span = t[t.len() - 1] - t[0];
    let dt = span / (t.len() - 1) as f64;
    if !(dt > 0.0) {
        return None;
    }
    let tol = 1e-9 * dt;
    if !t.windows(2).all(|w| ((w[1] - w[0]) - dt).abs() <= tol) {
        return None;
    }
    // Prefer a step that regenerates every time stamp as t0 + kΔ exactly, so
    // files written by this tool read back to the same interval.
    let exact = |d: f64| t.iter().enumerate().all(|(k, &tk)| t[0] + k as f64 * d == tk);
    let candidates = [dt, t[1] - t[0], next_toward(dt, f64::INFINITY), next_toward(dt, 0.0)];
    Some(candidates.into_iter().find(|&d| exact(d)).unwrap_or(dt))
}

fn next_toward(x: f64, target: f64) -> f64 {
    let bits = x.to_bits();
    f64::from_bits(if target > x { bits + 1 } else { bits - 1 })
}

/// Writes `id,t,re,im` rows with t = nΔ.
pub fn write_series(path: &Path, ids: &[String], series: &[ComplexSeries]) -> Result<()> {
    let mut w = create(path)?;
    let err = |e| io_error(path, e);
    writeln!(w, "{}", SERIES_HEADER.join(",")).map_err(err)?;
    for (id, s) in ids.iter().zip(series) {
        for (n, z) in s.values().iter().enumerate() {
            let t = n as f64 * s.dt();
            writeln!(w, "{id},{},{},{}", fmt_g17(t), fmt_g17(z.re), fmt_g17(z.im)).map_err(err)?;
        }
    }
    w.flush().map_err(err)
}

/// Writes a header and rows of numbers, each row optionally led by a label.
pub fn write_table(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = (Option<String>, Vec<f64>)>,
) -> Result<()> {
    let mut w = create(path)?;
    let err = |e| io_error(path, e);
    writeln!(w, "{}", header.join(",")).map_err(err)?;
    for (label, values) in rows {
        let mut cells: Vec<String> = label.into_iter().collect();
        cells.extend(values.into_iter().map(fmt_g17));
        writeln!(w, "{}", cells.join(",")).map_err(err)?;
    }
    w.flush().map_err(err)
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| io_error(path, e))?))
}
