//! Whittle and de-biased Whittle fitting of the Matérn model.
//!
//! The amplitude enters every model spectrum linearly through σ², so it is
//! profiled out in closed form (σ̂² = mean of Ŝ/f over the band, with f the
//! unit-variance model) and Nelder–Mead searches only over the shape
//! coordinates (ln(α − ½), ln λ[, Ω]).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{diffusivity, ProcessParams};
use crate::series::ComplexSeries;
use crate::spectral::{
    fourier_frequency, periodogram, sampled_spectrum, tapered_spectrum, ExpectedSpectrumKernel, SpectralEstimate, Taper,
};

/// Set of Fourier indices entering the likelihood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyBand {
    n: usize,
    indices: Vec<usize>,
}

impl FrequencyBand {
    /// Every index, optionally without m = 0.
    pub fn all(n: usize, include_zero: bool) -> Result<Self> {
        Self::explicit(n, (usize::from(!include_zero)..n).collect())
    }

    /// Indices with |ω_m| ≤ omega_max.
    pub fn max_abs_frequency(n: usize, dt: f64, omega_max: f64, include_zero: bool) -> Result<Self> {
        if !(omega_max > 0.0) {
            return Err(Error::InvalidParams(format!("band edge must be > 0, got {omega_max}")));
        }
        let tol = 1e-12 * omega_max;
        Self::explicit(
            n,
            (0..n)
                .filter(|&m| (include_zero || m != 0) && fourier_frequency(m, n, dt).abs() <= omega_max + tol)
                .collect(),
        )
    }

    /// Explicit index list; sorted and deduplicated.
    pub fn explicit(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::InvalidParams("frequency band is empty".into()));
        }
        if let Some(&m) = indices.iter().find(|&&m| m >= n) {
            return Err(Error::InvalidParams(format!("band index {m} outside 0..{n}")));
        }
        Ok(Self { n, indices })
    }

    /// Keeps only indices where `values[m] > threshold`.
    pub fn retain_above(&self, values: &[f64], threshold: f64) -> Result<Self> {
        if values.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: values.len(),
            });
        }
        Self::explicit(
            self.n,
            self.indices
                .iter()
                .copied()
                .filter(|&m| values[m] > threshold)
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// ℓ = −Σ_{m∈band} [ln S^θ[m] + Ŝ[m]/S^θ[m]].
pub fn whittle_loglik(estimate: &SpectralEstimate, model: &SpectralEstimate, band: &FrequencyBand) -> Result<f64> {
    whittle_raw(estimate.values(), model.values(), band)
}

fn whittle_raw(est: &[f64], model: &[f64], band: &FrequencyBand) -> Result<f64> {
    if est.len() != model.len() || est.len() != band.n {
        return Err(Error::LengthMismatch {
            expected: est.len(),
            got: if model.len() != est.len() { model.len() } else { band.n },
        });
    }
    let mut sum = 0.0;
    for &m in &band.indices {
        let s = model[m];
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Degenerate(format!("model spectrum is {s} at index {m}")));
        }
        sum += s.ln() + est[m] / s;
    }
    Ok(-sum)
}

/// Likelihood variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    /// Estimate against the sampled model spectrum S(ω_m)/Δ.
    Whittle,
    /// Tapered estimate against its expectation under the model.
    DebiasedWhittle,
}

/// Nelder–Mead settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Objective evaluations per local search.
    pub max_evals: usize,
    /// Convergence threshold on the simplex diameter in transformed space.
    pub tol: f64,
    /// Points per shape coordinate in the starting grid.
    pub grid: usize,
    /// Local searches started from the best grid points.
    pub starts: usize,
    pub alpha_max: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_evals: 2000,
            tol: 1e-6,
            grid: 3,
            starts: 2,
            alpha_max: 20.0,
        }
    }
}

/// Options for [`fit_matern`].
#[derive(Debug, Clone)]
pub struct FitOptions {
    pub method: FitMethod,
    /// Required for the de-biased method; optional for plain Whittle.
    pub taper: Option<Taper>,
    pub fit_spin: bool,
    /// Subtract the sample mean before estimating the spectrum.
    pub demean: bool,
    pub optimizer: OptimizerConfig,
}

impl FitOptions {
    pub fn whittle() -> Self {
        Self {
            method: FitMethod::Whittle,
            taper: None,
            fit_spin: false,
            demean: true,
            optimizer: OptimizerConfig::default(),
        }
    }

    pub fn debiased(taper: Taper) -> Self {
        Self {
            method: FitMethod::DebiasedWhittle,
            taper: Some(taper),
            ..Self::whittle()
        }
    }
}

/// Outcome of a fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: ProcessParams,
    pub loglik: f64,
    pub band: FrequencyBand,
    /// Objective evaluations, grid included.
    pub iterations: usize,
    pub converged: bool,
    pub method: FitMethod,
    pub warnings: Vec<String>,
}

enum ModelEval {
    Sampled { n: usize, dt: f64 },
    Expected(ExpectedSpectrumKernel),
}

struct Objective<'a> {
    est: &'a [f64],
    band: &'a FrequencyBand,
    eval: ModelEval,
    omega_fixed: f64,
    fit_spin: bool,
    alpha_max: f64,
    lambda_bounds: (f64, f64),
    evals: usize,
}

impl Objective<'_> {
    fn params(&self, x: &[f64], sigma: f64) -> Option<ProcessParams> {
        let alpha = 0.5 + x[0].exp();
        let lambda = x[1].exp();
        let omega = if self.fit_spin { x[2] } else { self.omega_fixed };
        if !(alpha <= self.alpha_max && lambda >= self.lambda_bounds.0 && lambda <= self.lambda_bounds.1) {
            return None;
        }
        ProcessParams::new(sigma, alpha, lambda, omega).ok()
    }

    /// Profiled negative log-likelihood and the σ that attains it.
    fn eval(&mut self, x: &[f64]) -> (f64, f64) {
        self.evals += 1;
        let Some(unit) = self.params(x, 1.0) else {
            return (f64::INFINITY, f64::NAN);
        };
        let model = match &self.eval {
            ModelEval::Sampled { n, dt } => sampled_spectrum(&unit, *n, *dt),
            ModelEval::Expected(k) => k.matern(&unit),
        };
        let Ok(model) = model else {
            return (f64::INFINITY, f64::NAN);
        };
        let f = model.values();
        let mut ratio = 0.0;
        for &m in &self.band.indices {
            if !(f[m] > 0.0 && f[m].is_finite()) {
                return (f64::INFINITY, f64::NAN);
            }
            ratio += self.est[m] / f[m];
        }
        let s2 = ratio / self.band.len() as f64;
        if !(s2 > 0.0 && s2.is_finite()) {
            return (f64::INFINITY, f64::NAN);
        }
        let mut nll = 0.0;
        for &m in &self.band.indices {
            nll += (s2 * f[m]).ln() + self.est[m] / (s2 * f[m]);
        }
        (nll, s2.sqrt())
    }
}

/// Maximizes the (de-biased) Whittle likelihood over θ = (σ, α, λ[, Ω]).
pub fn fit_matern(z: &ComplexSeries, band: &FrequencyBand, opts: &FitOptions) -> Result<FitResult> {
    let n = z.len();
    let dt = z.dt();
    if band.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: band.n(),
        });
    }
    let data = if opts.demean { z.demeaned() } else { z.clone() };
    let var = data.values().iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
    if !(var > 0.0) {
        return Err(Error::Degenerate("series has zero variance".into()));
    }
    if opts.method == FitMethod::DebiasedWhittle && opts.taper.is_none() {
        return Err(Error::Config(
            "de-biased Whittle needs a taper (the boxcar is allowed)".into(),
        ));
    }
    let estimate = match &opts.taper {
        Some(t) => tapered_spectrum(&data, t)?,
        None => periodogram(&data)?,
    };
    let eval = match opts.method {
        FitMethod::Whittle => ModelEval::Sampled { n, dt },
        FitMethod::DebiasedWhittle => {
            ModelEval::Expected(ExpectedSpectrumKernel::new(opts.taper.as_ref().expect("checked"), dt)?)
        }
    };

    let omega_mode = band
        .indices()
        .iter()
        .copied()
        .max_by(|&a, &b| estimate.values()[a].total_cmp(&estimate.values()[b]))
        .map(|m| fourier_frequency(m, n, dt))
        .unwrap_or(0.0);
    let fundamental = 2.0 * PI / (n as f64 * dt);
    let nyquist = PI / dt;
    let cfg = opts.optimizer;
    let mut obj = Objective {
        est: estimate.values(),
        band,
        eval,
        omega_fixed: 0.0,
        fit_spin: opts.fit_spin,
        alpha_max: cfg.alpha_max,
        lambda_bounds: (fundamental * 1e-4, nyquist * 1e3),
        evals: 0,
    };

    // Starting grid: α − ½ from 0.1 to 3.5, λ from the fundamental to Nyquist.
    let g = cfg.grid.max(1);
    let lerp = |lo: f64, hi: f64, i: usize| {
        if g == 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (g - 1) as f64
        }
    };
    let mut starts: Vec<(f64, Vec<f64>)> = Vec::new();
    for i in 0..g {
        for j in 0..g {
            let mut x = vec![
                lerp(0.1f64.ln(), 3.5f64.ln(), i),
                lerp(fundamental.ln(), nyquist.ln(), j),
            ];
            if opts.fit_spin {
                x.push(omega_mode);
            }
            let (f, _) = obj.eval(&x);
            starts.push((f, x));
        }
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if !starts[0].0.is_finite() {
        return Err(Error::Degenerate(
            "likelihood is not finite anywhere on the starting grid".into(),
        ));
    }

    let mut steps = vec![0.5, 0.5];
    if opts.fit_spin {
        steps.push((0.1 * omega_mode.abs()).max(2.0 * fundamental));
    }
    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    for (f0, x0) in starts.iter().take(cfg.starts.max(1)) {
        if !f0.is_finite() {
            continue;
        }
        let (f, x, conv) = nelder_mead(|x| obj.eval(x).0, x0, &steps, cfg.max_evals, cfg.tol);
        if best.as_ref().is_none_or(|b| f < b.0) {
            best = Some((f, x, conv));
        }
    }
    let (nll, x, converged) = best.expect("at least one finite start");
    let (nll_check, sigma) = obj.eval(&x);
    debug_assert!((nll_check - nll).abs() <= 1e-9 * nll.abs().max(1.0));
    let params = obj
        .params(&x, sigma)
        .ok_or_else(|| Error::Degenerate("optimizer left the feasible region".into()))?;

    let mut warnings = Vec::new();
    if params.alpha() < 0.5 + 1e-3 || params.alpha() > 0.99 * cfg.alpha_max {
        warnings.push(format!("alpha = {:.4} is at a search bound", params.alpha()));
    }
    if params.lambda() > 0.99 * obj.lambda_bounds.1 || params.lambda() < 1.01 * obj.lambda_bounds.0 {
        warnings.push(format!("lambda = {:.4e} is at a search bound", params.lambda()));
    }
    if !converged {
        warnings.push(format!("no convergence within {} evaluations", cfg.max_evals));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(FitResult {
        params,
        loglik: -nll,
        band: band.clone(),
        iterations: obj.evals,
        converged,
        method: opts.method,
        warnings,
    })
}

/// Diffusivity κ = S(0)/4 of the fitted model.
pub fn kappa_from_fit(result: &FitResult) -> Result<f64> {
    if !result.converged {
        return Err(Error::Degenerate("fit did not converge".into()));
    }
    diffusivity(&result.params)
}

/// Minimizes `f` from `x0` with an axis-aligned initial simplex.
/// Returns (best value, best point, converged).
fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    steps: &[f64],
    max_evals: usize,
    tol: f64,
) -> (f64, Vec<f64>, bool) {
    let d = x0.len();
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(d + 1);
    simplex.push((f(x0), x0.to_vec()));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += steps[i];
        simplex.push((f(&x), x));
    }
    let mut evals = d + 1;
    let point = |c: &[f64], x: &[f64], t: f64| -> Vec<f64> { c.iter().zip(x).map(|(c, x)| c + t * (x - c)).collect() };
    loop {
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        let diameter = simplex[1..]
            .iter()
            .map(|(_, x)| {
                x.iter()
                    .zip(&simplex[0].1)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < tol {
            return (simplex[0].0, simplex[0].1.clone(), true);
        }
        if evals >= max_evals {
            return (simplex[0].0, simplex[0].1.clone(), false);
        }
        let mut centroid = vec![0.0; d];
        for (_, x) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / d as f64;
            }
        }
        let worst = simplex[d].clone();
        let xr = point(&centroid, &worst.1, -1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < simplex[0].0 {
            let xe = point(&centroid, &worst.1, -2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[d] = if fe < fr { (fe, xe) } else { (fr, xr) };
        } else if fr < simplex[d - 1].0 {
            simplex[d] = (fr, xr);
        } else {
            let (xc, fc) = if fr < worst.0 {
                let xc = point(&centroid, &worst.1, -0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = point(&centroid, &worst.1, 0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            evals += 1;
            if fc < worst.0.min(fr) {
                simplex[d] = (fc, xc);
            } else {
                let best = simplex[0].1.clone();
                for v in simplex.iter_mut().skip(1) {
                    v.1 = point(&best, &v.1, 0.5);
                    v.0 = f(&v.1);
                }
                evals += d;
            }
        }
    }
}
