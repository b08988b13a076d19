use matern::fit::{fit_matern, FitMethod, FitOptions, FrequencyBand};
use matern::model::diffusivity;
use matern::spectral::{slepian_taper, Taper};
use matern::ComplexSeries;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{path_string, write_json};
use crate::args::{FitArgs, FitMethodArg, TaperKind};
use crate::csvio::read_series;
use crate::error::{CliError, Result};
use crate::manifest::{manifest_path, RunManifest};

pub fn run(a: &FitArgs, argv: &[String]) -> Result<()> {
    if a.seed_grid == 0 {
        return Err(CliError::Usage("--seed-grid must be >= 1".into()));
    }
    if let Some(w) = a.max_freq {
        if !(w > 0.0) {
            return Err(CliError::Usage(format!("--max-freq must be > 0, got {w}")));
        }
    }
    let ens = read_series(&a.input)?;
    let fits: Vec<Value> = ens
        .ids
        .par_iter()
        .zip(ens.series.par_iter())
        .map(|(id, z)| fit_one(a, id, z))
        .collect::<Result<_>>()?;
    let converged = fits.iter().filter(|f| f["converged"] == json!(true)).count();
    write_json(&a.out, &Value::Array(fits))?;

    let mut m = RunManifest::new(
        "fit",
        argv,
        json!({
            "method": format!("{:?}", a.method).to_lowercase(),
            "taper": a.taper.map(|t| format!("{t:?}").to_lowercase()),
            "nw": a.nw,
            "max_freq": a.max_freq,
            "include_zero": a.include_zero,
            "fit_spin": a.fit_spin,
            "seed_grid": a.seed_grid,
            "demean": !a.no_demean,
        }),
    );
    m.inputs = vec![path_string(&a.input)];
    m.outputs = vec![path_string(&a.out)];
    m.results = json!({ "series": ens.len(), "converged": converged });
    m.write(&manifest_path(&a.out))?;
    if converged == 0 {
        return Err(CliError::Numerical(format!("no fit converged ({} series)", ens.len())));
    }
    if converged < ens.len() {
        log::warn!("{} of {} fits did not converge", ens.len() - converged, ens.len());
    }
    Ok(())
}

fn options(a: &FitArgs, n: usize) -> Result<FitOptions> {
    let taper = match (a.method, a.taper) {
        (_, Some(TaperKind::Slepian)) | (FitMethodArg::Debiased, None) => Some(slepian_taper(n, a.nw, 0)?),
        (FitMethodArg::Debiased, Some(TaperKind::None)) => Some(Taper::boxcar(n)?),
        (FitMethodArg::Whittle, _) => None,
    };
    let mut opts = match a.method {
        FitMethodArg::Whittle => FitOptions {
            taper,
            ..FitOptions::whittle()
        },
        FitMethodArg::Debiased => FitOptions {
            method: FitMethod::DebiasedWhittle,
            taper,
            ..FitOptions::whittle()
        },
    };
    opts.fit_spin = a.fit_spin;
    opts.demean = !a.no_demean;
    opts.optimizer.grid = a.seed_grid;
    Ok(opts)
}

fn fit_one(a: &FitArgs, id: &str, z: &ComplexSeries) -> Result<Value> {
    let n = z.len();
    let band = match a.max_freq {
        Some(w) => FrequencyBand::max_abs_frequency(n, z.dt(), w, a.include_zero)?,
        None => FrequencyBand::all(n, a.include_zero)?,
    };
    let opts = options(a, n)?;
    match fit_matern(z, &band, &opts) {
        Ok(r) => {
            for w in &r.warnings {
                log::warn!("series '{id}': {w}");
            }
            let p = r.params;
            Ok(json!({
                "id": id,
                "sigma": p.sigma(),
                "alpha": p.alpha(),
                "lambda": p.lambda(),
                "omega": p.omega(),
                "loglik": r.loglik,
                "kappa": diffusivity(&p).ok(),
                "converged": r.converged,
                "iterations": r.iterations,
                "frequencies": r.band.len(),
                "warnings": r.warnings,
            }))
        }
        Err(e) => match CliError::from(e) {
            CliError::Numerical(msg) => {
                log::warn!("series '{id}': {msg}");
                Ok(json!({ "id": id, "converged": false, "error": msg }))
            }
            other => Err(other),
        },
    }
}
