use matern::fbm::FbmParams;
use matern::model::ProcessParams;
use matern::simulate::{
    build_covariance, complex_noise, fbm_sample, realization_rng, white_noise, CholeskyFactor, CholeskyOptions,
    CovarianceModel, FastGenConfig, FastGenerator,
};
use matern::ComplexSeries;
use rayon::prelude::*;
use serde_json::json;

use super::{oversampling, path_string};
use crate::args::{ModelKind, SimMethod, SimulateArgs};
use crate::csvio::write_series;
use crate::error::{CliError, Result};
use crate::manifest::{manifest_path, RunManifest};

pub fn run(a: &SimulateArgs, argv: &[String]) -> Result<()> {
    if a.n == 0 {
        return Err(CliError::Usage("--n must be >= 1".into()));
    }
    let stationary = a.model != ModelKind::Fbm;
    let method = a.method.unwrap_or(if stationary {
        SimMethod::Fast
    } else {
        SimMethod::Cholesky
    });
    let mut results = serde_json::Map::new();
    let series = match a.model {
        ModelKind::Matern | ModelKind::Omp => {
            if a.model == ModelKind::Matern && a.omega != 0.0 {
                return Err(CliError::Usage(
                    "model matern has omega = 0; use --model omp for an oscillating process".into(),
                ));
            }
            let p = process_params(a)?;
            results.insert("sigma".into(), json!(p.sigma()));
            results.insert("amplitude".into(), json!(p.amplitude()));
            match method {
                SimMethod::Fast => {
                    let cfg = FastGenConfig {
                        epsilon: a.epsilon,
                        oversampling: oversampling(a.oversample),
                        seed: a.seed,
                    };
                    let gen = FastGenerator::new(&p, a.n, a.dt, &cfg)?;
                    results.insert("oversampling".into(), json!(gen.oversampling()));
                    results.insert("burn_in".into(), json!(gen.burn_in()));
                    fast_parallel(&gen, a.count, a.seed)?
                }
                SimMethod::Cholesky => {
                    let cov = build_covariance(&CovarianceModel::Matern(p), a.n, a.dt)?;
                    let factor = CholeskyFactor::new(cov, CholeskyOptions { jitter_retry: a.jitter })?;
                    results.insert("jitter".into(), json!(factor.jitter()));
                    factor.sample(a.count, a.seed)
                }
            }
        }
        ModelKind::Fbm => {
            if method == SimMethod::Fast {
                return Err(CliError::Usage("model fbm is nonstationary: Cholesky only".into()));
            }
            if a.sigma.is_some() || a.lambda.is_some() || a.omega != 0.0 {
                return Err(CliError::Usage(
                    "model fbm takes only --amplitude and --alpha (no sigma, lambda or omega)".into(),
                ));
            }
            let p = FbmParams::new(a.amplitude.unwrap_or(1.0), required(a.alpha, "alpha")?)?;
            fbm_sample(
                &p,
                a.n,
                a.dt,
                a.count,
                a.seed,
                CholeskyOptions { jitter_retry: a.jitter },
            )?
        }
        ModelKind::Whitenoise => {
            if a.alpha.is_some() || a.lambda.is_some() || a.amplitude.is_some() || a.omega != 0.0 {
                return Err(CliError::Usage("model whitenoise takes only --sigma".into()));
            }
            white_noise(a.sigma.unwrap_or(1.0), a.n, a.dt, a.count, a.seed)?
        }
    };
    let ids: Vec<String> = (0..series.len()).map(|i| i.to_string()).collect();
    write_series(&a.out, &ids, &series)?;

    let mut m = RunManifest::new("simulate", argv, parameters(a, method));
    m.seed = Some(a.seed);
    m.outputs = vec![path_string(&a.out)];
    m.results = results.into();
    m.write(&manifest_path(&a.out))
}

fn required(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required for this model")))
}

fn process_params(a: &SimulateArgs) -> Result<ProcessParams> {
    let alpha = required(a.alpha, "alpha")?;
    let lambda = required(a.lambda, "lambda")?;
    Ok(match a.amplitude {
        Some(amp) => ProcessParams::from_amplitude(amp, alpha, lambda, a.omega)?,
        None => ProcessParams::new(a.sigma.unwrap_or(1.0), alpha, lambda, a.omega)?,
    })
}

/// Same streams as `FastGenerator::sample`, one realization per task.
fn fast_parallel(gen: &FastGenerator, count: usize, seed: u64) -> Result<Vec<ComplexSeries>> {
    (0..count)
        .into_par_iter()
        .map(|r| {
            let mut rng = realization_rng(seed, r as u64);
            let noise = complex_noise(&mut rng, gen.fine_len());
            Ok(gen.realize_from_noise(&noise)?)
        })
        .collect()
}

fn parameters(a: &SimulateArgs, method: SimMethod) -> serde_json::Value {
    json!({
        "model": format!("{:?}", a.model).to_lowercase(),
        "sigma": a.sigma,
        "amplitude": a.amplitude,
        "alpha": a.alpha,
        "lambda": a.lambda,
        "omega": a.omega,
        "n": a.n,
        "dt": a.dt,
        "count": a.count,
        "method": format!("{method:?}").to_lowercase(),
        "epsilon": a.epsilon,
        "oversample": a.oversample.to_string(),
        "jitter": a.jitter,
    })
}
