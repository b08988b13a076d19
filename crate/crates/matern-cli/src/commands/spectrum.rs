use std::collections::BTreeSet;

use matern::model::ProcessParams;
use matern::spectral::{
    aliased_spectrum, fourier_frequency, monotone_order, multitaper_with, periodogram, slepian_tapers,
    tapered_spectrum, SpectralEstimate,
};
use matern::ComplexSeries;
use rayon::prelude::*;
use serde_json::json;

use super::{parse_assignments, path_string};
use crate::args::{SpectrumArgs, TaperKind};
use crate::csvio::{read_series, write_table};
use crate::error::{CliError, Result};
use crate::manifest::{manifest_path, RunManifest};

/// Aliases summed on each side for the theory column.
pub const THEORY_ALIAS_TERMS: usize = 50;

pub fn run(a: &SpectrumArgs, argv: &[String]) -> Result<()> {
    if a.ntapers == 0 {
        return Err(CliError::Usage("--ntapers must be >= 1".into()));
    }
    if a.taper == TaperKind::None && (a.ntapers > 1 || a.adaptive) {
        return Err(CliError::Usage("--ntapers and --adaptive need --taper slepian".into()));
    }
    let theory_params = a.params.as_deref().map(model_from_assignments).transpose()?;
    let ens = read_series(&a.input)?;
    if a.average {
        ens.common_shape()?;
    }
    let estimates: Vec<SpectralEstimate> = ens.series.par_iter().map(|z| estimate(a, z)).collect::<Result<_>>()?;
    let warnings: BTreeSet<String> = estimates.iter().flat_map(|e| e.warnings().iter().cloned()).collect();
    for w in &warnings {
        log::warn!("{w}");
    }

    let mut header = Vec::new();
    let labelled = ens.len() > 1 && !a.average;
    if labelled {
        header.push("id");
    }
    header.extend(["freq_rad_per_time", "estimate"]);
    if theory_params.is_some() {
        header.push("theory");
    }
    let groups: Vec<(Option<String>, Vec<f64>, f64)> = if a.average {
        let k = estimates.len() as f64;
        let n = estimates[0].len();
        let mean = (0..n)
            .map(|m| estimates.iter().map(|e| e.values()[m]).sum::<f64>() / k)
            .collect();
        vec![(None, mean, estimates[0].dt())]
    } else {
        ens.ids
            .iter()
            .zip(&estimates)
            .map(|(id, e)| (labelled.then(|| id.clone()), e.values().to_vec(), e.dt()))
            .collect()
    };
    let mut rows = Vec::new();
    for (label, values, dt) in &groups {
        let n = values.len();
        for m in monotone_order(n) {
            let freq = fourier_frequency(m, n, *dt);
            let mut row = vec![freq, values[m] * dt];
            if let Some(p) = &theory_params {
                row.push(aliased_spectrum(p, freq, *dt, THEORY_ALIAS_TERMS)? * dt);
            }
            rows.push((label.clone(), row));
        }
    }
    write_table(&a.out, &header, rows)?;

    let mut m = RunManifest::new(
        "spectrum",
        argv,
        json!({
            "taper": format!("{:?}", a.taper).to_lowercase(),
            "nw": a.nw,
            "ntapers": a.ntapers,
            "adaptive": a.adaptive,
            "average": a.average,
            "demean": a.demean,
            "params": a.params,
        }),
    );
    m.inputs = vec![path_string(&a.input)];
    m.outputs = vec![path_string(&a.out)];
    m.results = json!({ "series": ens.len(), "warnings": warnings });
    m.write(&manifest_path(&a.out))
}

fn estimate(a: &SpectrumArgs, z: &ComplexSeries) -> Result<SpectralEstimate> {
    let owned;
    let z = if a.demean {
        owned = z.demeaned();
        &owned
    } else {
        z
    };
    Ok(match a.taper {
        TaperKind::None => periodogram(z)?,
        TaperKind::Slepian => {
            let tapers = slepian_tapers(z.len(), a.nw, a.ntapers)?;
            if tapers.len() == 1 && !a.adaptive {
                tapered_spectrum(z, &tapers[0])?
            } else {
                multitaper_with(z, &tapers, a.adaptive)?
            }
        }
    })
}

/// Model from "sigma=..,alpha=..,lambda=..[,omega=..]", or amplitude in place of sigma.
pub(crate) fn model_from_assignments(text: &str) -> Result<ProcessParams> {
    let mut kv = parse_assignments("params", text)?;
    let mut take = |k: &str| kv.remove(k);
    let (sigma, amplitude) = (take("sigma"), take("amplitude"));
    let alpha = take("alpha").ok_or_else(|| CliError::Usage("--params needs alpha".into()))?;
    let lambda = take("lambda").ok_or_else(|| CliError::Usage("--params needs lambda".into()))?;
    let omega = take("omega").unwrap_or(0.0);
    if let Some(k) = kv.keys().next() {
        return Err(CliError::Usage(format!("--params: unknown key '{k}'")));
    }
    Ok(match (sigma, amplitude) {
        (Some(_), Some(_)) => return Err(CliError::Usage("--params: give sigma or amplitude, not both".into())),
        (_, Some(amp)) => ProcessParams::from_amplitude(amp, alpha, lambda, omega)?,
        (s, None) => ProcessParams::new(s.unwrap_or(1.0), alpha, lambda, omega)?,
    })
}
