//! Generation of realizations: exact Cholesky sampling and the fast
//! Green's-function method, plus an audit of the latter's implied covariance.
//!
//! Complex white noise has independent real and imaginary parts of variance
//! 1/2 each, so E|w|² = 1. Realization `r` of a call seeded with `seed` draws
//! from its own ChaCha stream, so it does not depend on how many other
//! realizations are requested.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};

use crate::error::{domain, Error, Result};
use crate::fbm::{fbm_covariance, FbmParams};
use crate::linalg;
use crate::model::{autocovariance, ln_matern_c, ProcessParams};
use crate::specfun::{inv_reg_lower_incomplete_gamma, ln_gamma_pos};

pub use crate::series::ComplexSeries;

/// Largest oversampled grid the fast method will allocate.
pub const MAX_FINE_LEN: usize = 1 << 27;

/// Random stream for realization `index` of a run seeded with `seed`.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Unit-variance complex Gaussian noise.
pub fn complex_noise<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        })
        .collect()
}

/// Independent complex white noise series with E|z|² = σ².
pub fn white_noise(sigma: f64, n: usize, dt: f64, count: usize, seed: u64) -> Result<Vec<ComplexSeries>> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidParams(format!("sigma must be >= 0, got {sigma}")));
    }
    (0..count)
        .map(|r| {
            let mut rng = realization_rng(seed, r as u64);
            let v = complex_noise(&mut rng, n).into_iter().map(|w| w * sigma).collect();
            ComplexSeries::new(dt, v)
        })
        .collect()
}

/// Source of a covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CovarianceModel {
    Matern(ProcessParams),
    Fbm(FbmParams),
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

/// Dense Hermitian covariance matrix R_{m,n} = E[z_m z_n*], stored in full.
///
/// Real-valued matrices (no spin) are kept in real storage, which halves
/// memory and lets factorization use real arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n: usize,
    dt: f64,
    toeplitz: bool,
    storage: Storage,
}

impl CovarianceMatrix {
    /// Hermitian Toeplitz matrix from the lags R(0), R(Δ), ..., R((n−1)Δ).
    pub fn toeplitz(dt: f64, acvs: &[Complex64]) -> Result<Self> {
        let n = acvs.len();
        if n == 0 {
            return Err(Error::Degenerate("empty autocovariance".into()));
        }
        check_dt(dt)?;
        let storage = if acvs.iter().all(|r| r.im == 0.0) {
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    a[i * n + j] = acvs[i.abs_diff(j)].re;
                }
            }
            Storage::Real(a)
        } else {
            let mut a = vec![Complex64::default(); n * n];
            for i in 0..n {
                for j in 0..n {
                    a[i * n + j] = if i >= j { acvs[i - j] } else { acvs[j - i].conj() };
                }
            }
            Storage::Complex(a)
        };
        Ok(Self {
            n,
            dt,
            toeplitz: true,
            storage,
        })
    }

    /// General Hermitian matrix from row-major entries.
    pub fn from_entries(dt: f64, n: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dt(dt)?;
        if entries.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        let scale = entries
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for i in 0..n {
            for j in 0..=i {
                if (entries[i * n + j] - entries[j * n + i].conj()).norm() > 1e-12 * scale {
                    return Err(Error::InvalidParams(format!("matrix is not Hermitian at ({i}, {j})")));
                }
            }
        }
        let storage = if entries.iter().all(|z| z.im == 0.0) {
            Storage::Real(entries.iter().map(|z| z.re).collect())
        } else {
            Storage::Complex(entries)
        };
        Ok(Self {
            n,
            dt,
            toeplitz: false,
            storage,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        match &self.storage {
            Storage::Real(a) => Complex64::new(a[m * self.n + n], 0.0),
            Storage::Complex(a) => a[m * self.n + n],
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self.storage, Storage::Real(_))
    }

    /// True when built from a stationary model.
    pub fn is_toeplitz(&self) -> bool {
        self.toeplitz
    }

    /// Trace of the matrix.
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.entry(i, i).re).sum()
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if dt.is_finite() && dt > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("sample interval must be > 0, got {dt}")))
    }
}

/// Matérn lags R(jΔ), j = 0..n−1.
pub fn matern_lags(p: &ProcessParams, n: usize, dt: f64) -> Result<Vec<Complex64>> {
    (0..n).map(|j| autocovariance(p, j as f64 * dt)).collect()
}

/// Covariance matrix of n samples on the grid t = 0, Δ, ..., (n−1)Δ.
pub fn build_covariance(model: &CovarianceModel, n: usize, dt: f64) -> Result<CovarianceMatrix> {
    build_covariance_from(model, n, dt, 0.0)
}

fn build_covariance_from(model: &CovarianceModel, n: usize, dt: f64, t0: f64) -> Result<CovarianceMatrix> {
    if n == 0 {
        return Err(Error::InvalidParams("matrix dimension must be >= 1".into()));
    }
    check_dt(dt)?;
    match model {
        CovarianceModel::Matern(p) => CovarianceMatrix::toeplitz(dt, &matern_lags(p, n, dt)?),
        CovarianceModel::Fbm(p) => {
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let t = t0 + j as f64 * dt;
                    let v = fbm_covariance(p, t, (i - j) as f64 * dt);
                    a[i * n + j] = v;
                    a[j * n + i] = v;
                }
            }
            Ok(CovarianceMatrix {
                n,
                dt,
                toeplitz: false,
                storage: Storage::Real(a),
            })
        }
    }
}

/// Options for Cholesky factorization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CholeskyOptions {
    /// On failure, retry once with 1e−12·trace/N added to the diagonal.
    pub jitter_retry: bool,
}

/// Lower Cholesky factor L of a covariance matrix (R = L Lᴴ).
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    n: usize,
    dt: f64,
    storage: Storage,
    jitter: Option<f64>,
}

impl CholeskyFactor {
    /// Factors `cov` in place, consuming it.
    pub fn new(cov: CovarianceMatrix, opts: CholeskyOptions) -> Result<Self> {
        let CovarianceMatrix { n, dt, storage, .. } = cov;
        let jitter_amount = 1e-12 * (0..n).map(|i| diag(&storage, n, i)).sum::<f64>() / n as f64;
        let (storage, jitter) = match storage {
            Storage::Real(mut a) => {
                let j = factor_with_retry(&mut a, n, opts, jitter_amount)?;
                (Storage::Real(a), j)
            }
            Storage::Complex(mut a) => {
                let j = factor_with_retry(&mut a, n, opts, jitter_amount)?;
                (Storage::Complex(a), j)
            }
        };
        Ok(Self { n, dt, storage, jitter })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        match &self.storage {
            Storage::Real(a) => Complex64::new(a[m * self.n + n], 0.0),
            Storage::Complex(a) => a[m * self.n + n],
        }
    }

    /// Diagonal jitter that had to be added, if any.
    pub fn jitter(&self) -> Option<f64> {
        self.jitter
    }

    /// L w for a caller-supplied noise vector of length N.
    pub fn apply(&self, noise: &[Complex64]) -> Result<Vec<Complex64>> {
        if noise.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: noise.len(),
            });
        }
        Ok(self.apply_columns(noise, 1))
    }

    fn apply_columns(&self, w: &[Complex64], cols: usize) -> Vec<Complex64> {
        match &self.storage {
            Storage::Real(l) => linalg::real_lower_times_complex(l, self.n, w, cols),
            Storage::Complex(l) => linalg::complex_lower_times_complex(l, self.n, w, cols),
        }
    }

    /// `count` realizations L w with independent unit-variance noise.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<ComplexSeries> {
        if count == 0 {
            return Vec::new();
        }
        let n = self.n;
        let mut w = vec![Complex64::default(); n * count];
        for r in 0..count {
            let mut rng = realization_rng(seed, r as u64);
            for (i, v) in complex_noise(&mut rng, n).into_iter().enumerate() {
                w[i * count + r] = v;
            }
        }
        let z = self.apply_columns(&w, count);
        (0..count)
            .map(|r| {
                let v = (0..n).map(|i| z[i * count + r]).collect();
                ComplexSeries::new(self.dt, v).expect("finite factor times finite noise")
            })
            .collect()
    }
}

fn diag(s: &Storage, n: usize, i: usize) -> f64 {
    match s {
        Storage::Real(a) => a[i * n + i],
        Storage::Complex(a) => a[i * n + i].re,
    }
}

fn factor_with_retry<T: linalg::Scalar>(
    a: &mut [T],
    n: usize,
    opts: CholeskyOptions,
    jitter: f64,
) -> Result<Option<f64>> {
    let saved_diag: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    match linalg::cholesky_in_place(a, n) {
        Ok(()) => Ok(None),
        Err((pivot, value)) if opts.jitter_retry => {
            // The strict upper triangle is untouched on failure; restore the
            // lower half from it.
            for i in 0..n {
                for j in 0..i {
                    a[i * n + j] = a[j * n + i].conj();
                }
                a[i * n + i] = saved_diag[i] + T::from_re(jitter);
            }
            log::warn!("Cholesky failed at pivot {pivot} (value {value:e}); retrying with diagonal jitter {jitter:e}");
            linalg::cholesky_in_place(a, n).map_err(|(pivot, value)| Error::NotPositiveDefinite { pivot, value })?;
            Ok(Some(jitter))
        }
        Err((pivot, value)) => Err(Error::NotPositiveDefinite { pivot, value }),
    }
}

/// Exact sampling ẑ = L w from the lower Cholesky factor of `cov`.
pub fn cholesky_sample(cov: CovarianceMatrix, count: usize, seed: u64) -> Result<Vec<ComplexSeries>> {
    cholesky_sample_with(cov, count, seed, CholeskyOptions::default())
}

/// [`cholesky_sample`] with explicit factorization options.
pub fn cholesky_sample_with(
    cov: CovarianceMatrix,
    count: usize,
    seed: u64,
    opts: CholeskyOptions,
) -> Result<Vec<ComplexSeries>> {
    Ok(CholeskyFactor::new(cov, opts)?.sample(count, seed))
}

/// fBm realizations on t = 0, Δ, ..., (n−1)Δ. The factorization runs on the
/// grid starting at Δ, where the matrix is nonsingular; z(0) = 0 is prepended.
pub fn fbm_sample(
    p: &FbmParams,
    n: usize,
    dt: f64,
    count: usize,
    seed: u64,
    opts: CholeskyOptions,
) -> Result<Vec<ComplexSeries>> {
    if n == 0 {
        return Err(Error::InvalidParams("series length must be >= 1".into()));
    }
    check_dt(dt)?;
    if n == 1 {
        return (0..count)
            .map(|_| ComplexSeries::new(dt, vec![Complex64::default()]))
            .collect();
    }
    let cov = build_covariance_from(&CovarianceModel::Fbm(*p), n - 1, dt, dt)?;
    let factor = CholeskyFactor::new(cov, opts)?;
    Ok(factor
        .sample(count, seed)
        .into_iter()
        .map(|s| {
            let mut v = Vec::with_capacity(n);
            v.push(Complex64::default());
            v.extend_from_slice(s.values());
            ComplexSeries::new(dt, v).expect("finite")
        })
        .collect())
}

/// Oversampling choice for the fast method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Oversampling {
    /// k = ceil(10 λ Δ), at least 1.
    #[default]
    Auto,
    Fixed(usize),
}

/// Configuration of the fast generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastGenConfig {
    /// Fraction ε of the Green's function mass allowed beyond the cutoff.
    pub epsilon: f64,
    pub oversampling: Oversampling,
    pub seed: u64,
}

impl Default for FastGenConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.01,
            oversampling: Oversampling::Auto,
            seed: 0,
        }
    }
}

/// k = ceil(10 λ Δ), at least 1.
pub fn auto_oversampling(lambda: f64, dt: f64) -> usize {
    ((10.0 * lambda * dt).ceil() as usize).max(1)
}

/// Cutoff T_ε with P(α, λT_ε) = 1 − ε.
pub fn fast_cutoff_time(p: &ProcessParams, epsilon: f64) -> Result<f64> {
    if !(p.lambda() > 0.0) {
        return Err(domain("fast_cutoff_time", "requires lambda > 0"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(domain(
            "fast_cutoff_time",
            format!("requires 0 < epsilon < 1, got {epsilon}"),
        ));
    }
    Ok(inv_reg_lower_incomplete_gamma(p.alpha(), 1.0 - epsilon)? / p.lambda())
}

/// The fast generator for a fixed (process, length, interval, ε, k).
///
/// Output n (before burn-in removal) is
/// ẑ_n = Σ_{p=0}^{L−1} G_p w_{(nk−p) mod L}, with L = N̂k, N̂ = N + N_ε and
/// G_p = σ √(Δ/k) g̃((p+½)Δ/k) the midpoint-sampled normalized Green's
/// function. The first N_ε outputs are discarded.
pub struct FastGenerator {
    params: ProcessParams,
    n: usize,
    dt: f64,
    k: usize,
    burn_in: usize,
    filter: Vec<Complex64>,
    filter_fft: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FastGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FastGenerator")
            .field("params", &self.params)
            .field("n", &self.n)
            .field("dt", &self.dt)
            .field("k", &self.k)
            .field("burn_in", &self.burn_in)
            .finish()
    }
}

impl FastGenerator {
    pub fn new(params: &ProcessParams, n: usize, dt: f64, cfg: &FastGenConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("series length must be >= 1".into()));
        }
        check_dt(dt)?;
        let lambda = params.lambda();
        if !(lambda > 0.0) {
            return Err(domain("fast_sample", "requires lambda > 0"));
        }
        let k = match cfg.oversampling {
            Oversampling::Auto => auto_oversampling(lambda, dt),
            Oversampling::Fixed(0) => return Err(Error::Config("oversampling factor must be >= 1".into())),
            Oversampling::Fixed(k) => k,
        };
        let t_eps = fast_cutoff_time(params, cfg.epsilon)?;
        let burn_f = (t_eps / dt).ceil();
        let total = (n as f64 + burn_f) * k as f64;
        if !(total <= MAX_FINE_LEN as f64) {
            return Err(Error::Config(format!(
                "oversampled grid of {total:.0} points exceeds the limit of {MAX_FINE_LEN}; \
                 lambda*dt = {:.3e} asks for k = {k}. Use a coarser sample interval, a larger epsilon, \
                 or a fixed oversampling factor",
                lambda * dt
            )));
        }
        let burn_in = burn_f as usize;
        let len = (n + burn_in) * k;

        // σ g̃_{α, λΔ/k, ΩΔ/k}(p + ½) evaluated in log space.
        let alpha = params.alpha();
        let lam = lambda * dt / k as f64;
        let om = params.omega() * dt / k as f64;
        let ln_pre = params.sigma().ln() + (alpha - 0.5) * lam.ln() - 0.5 * ln_matern_c(alpha) - ln_gamma_pos(alpha);
        let filter: Vec<Complex64> = (0..len)
            .map(|p| {
                let s = p as f64 + 0.5;
                let mag = (ln_pre + (alpha - 1.0) * s.ln() - lam * s).exp();
                if om == 0.0 {
                    Complex64::new(mag, 0.0)
                } else {
                    Complex64::from_polar(mag, om * s)
                }
            })
            .collect();

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let mut filter_fft = filter.clone();
        forward.process(&mut filter_fft);
        let norm = 1.0 / len as f64;
        for v in &mut filter_fft {
            *v *= norm;
        }
        Ok(Self {
            params: *params,
            n,
            dt,
            k,
            burn_in,
            filter,
            filter_fft,
            forward,
            inverse,
        })
    }

    /// Oversampling factor k.
    pub fn oversampling(&self) -> usize {
        self.k
    }

    /// Number of discarded leading outputs N_ε.
    pub fn burn_in(&self) -> usize {
        self.burn_in
    }

    /// Length L = (N + N_ε)k of the oversampled noise and filter.
    pub fn fine_len(&self) -> usize {
        self.filter.len()
    }

    /// The filter taps G_p = σ √(Δ/k) g̃((p+½)Δ/k).
    pub fn filter(&self) -> &[Complex64] {
        &self.filter
    }

    /// All N + N_ε decimated outputs for the given noise, burn-in included.
    pub fn full_output_from_noise(&self, noise: &[Complex64]) -> Result<Vec<Complex64>> {
        let len = self.fine_len();
        if noise.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                got: noise.len(),
            });
        }
        let mut buf = noise.to_vec();
        self.forward.process(&mut buf);
        for (b, g) in buf.iter_mut().zip(&self.filter_fft) {
            *b *= g;
        }
        self.inverse.process(&mut buf);
        Ok(buf.into_iter().step_by(self.k).collect())
    }

    /// One realization from caller-supplied noise of length [`fine_len`](Self::fine_len).
    pub fn realize_from_noise(&self, noise: &[Complex64]) -> Result<ComplexSeries> {
        let full = self.full_output_from_noise(noise)?;
        ComplexSeries::new(self.dt, full[self.burn_in..].to_vec())
    }

    /// `count` independent realizations.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<ComplexSeries> {
        (0..count)
            .map(|r| {
                let mut rng = realization_rng(seed, r as u64);
                let noise = complex_noise(&mut rng, self.fine_len());
                self.realize_from_noise(&noise).expect("noise length matches")
            })
            .collect()
    }

    /// Implied covariance R̂ between outputs j samples apart:
    /// Σ_p G_p [G_{p−jk} + G_{p−jk+L}]*, with G zero outside [0, L).
    pub fn implied_covariance(&self, lag: usize) -> Complex64 {
        let g = &self.filter;
        let len = g.len();
        let shift = lag * self.k;
        let mut direct = Complex64::default();
        let mut wrapped = Complex64::default();
        for (p, gp) in g.iter().enumerate() {
            if p >= shift {
                direct += gp * g[p - shift].conj();
            } else if p + len >= shift {
                wrapped += gp * g[p + len - shift].conj();
            }
        }
        direct + wrapped
    }
}

/// Realizations from the fast Green's-function method; `cfg.seed` seeds the run.
pub fn fast_sample(
    params: &ProcessParams,
    n: usize,
    dt: f64,
    cfg: &FastGenConfig,
    count: usize,
) -> Result<Vec<ComplexSeries>> {
    Ok(FastGenerator::new(params, n, dt, cfg)?.sample(count, cfg.seed))
}

/// Worst-case discrepancy between the fast method's implied covariance and
/// the exact sampled covariance over all N×N entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    pub max_abs_error: f64,
    /// `max_abs_error` divided by the variance σ².
    pub max_rel_error: f64,
    pub oversampling: usize,
    pub burn_in: usize,
}

/// Compares the fast method's covariance against the exact one. Both
/// matrices are Toeplitz, so the N lags cover every entry.
pub fn fast_audit(params: &ProcessParams, n: usize, dt: f64, cfg: &FastGenConfig) -> Result<AuditReport> {
    let gen = FastGenerator::new(params, n, dt, cfg)?;
    let mut max_abs: f64 = 0.0;
    for j in 0..n {
        let exact = autocovariance(params, j as f64 * dt)?;
        max_abs = max_abs.max((gen.implied_covariance(j) - exact).norm());
    }
    let var = params.sigma() * params.sigma();
    Ok(AuditReport {
        max_abs_error: max_abs,
        max_rel_error: if var > 0.0 { max_abs / var } else { 0.0 },
        oversampling: gen.oversampling(),
        burn_in: gen.burn_in(),
    })
}
