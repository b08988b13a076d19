//! Nonparametric spectral estimation: periodogram, Slepian tapers,
//! multitaper estimates, and the expected value of a tapered estimate.
//!
//! Estimates are stored in DFT order (index m ↔ frequency 2πm/(NΔ), indices
//! above N/2 wrapping to negative frequencies) and carry the per-sample
//! normalization |Σ h_n z_n e^{−i2πmn/N}|², without a factor of Δ. Multiply
//! by Δ to compare with a continuous-time spectral density.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::model::{autocovariance, spectrum, ProcessParams};
use crate::series::ComplexSeries;

/// Two-sided spectral estimate on the Fourier grid of an N-sample series.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEstimate {
    dt: f64,
    values: Vec<f64>,
    warnings: Vec<String>,
}

impl SpectralEstimate {
    /// Wraps DFT-ordered nonnegative values.
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParams(format!("sample interval must be > 0, got {dt}")));
        }
        if values.is_empty() {
            return Err(Error::Degenerate("empty spectral estimate".into()));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidParams(format!(
                "spectral value at index {i} is negative or non-finite: {}",
                values[i]
            )));
        }
        Ok(Self {
            dt,
            values,
            warnings: Vec::new(),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Frequencies in rad per time unit, DFT order, in (−π/Δ, π/Δ].
    pub fn freqs(&self) -> Vec<f64> {
        let n = self.values.len();
        (0..n).map(|m| fourier_frequency(m, n, self.dt)).collect()
    }

    /// (frequency, value) pairs sorted by increasing frequency.
    pub fn monotone(&self) -> Vec<(f64, f64)> {
        let n = self.values.len();
        monotone_order(n)
            .map(|m| (fourier_frequency(m, n, self.dt), self.values[m]))
            .collect()
    }

    /// Notes raised during estimation, such as too many tapers.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }
}

/// Frequency 2πm'/(NΔ) of DFT index m, with m' = m − N for m > N/2.
pub fn fourier_frequency(m: usize, n: usize, dt: f64) -> f64 {
    let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
    2.0 * PI * signed / (n as f64 * dt)
}

/// DFT indices in order of increasing frequency.
pub fn monotone_order(n: usize) -> impl Iterator<Item = usize> {
    let half = n / 2;
    (half + 1..n).chain(0..=half)
}

fn fft_forward(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

/// Periodogram |Z_m|²/N.
pub fn periodogram(z: &ComplexSeries) -> Result<SpectralEstimate> {
    let n = z.len();
    if n < 2 {
        return Err(Error::Degenerate("periodogram needs at least 2 samples".into()));
    }
    let mut buf = z.values().to_vec();
    fft_forward(&mut buf);
    SpectralEstimate::new(z.dt(), buf.iter().map(|c| c.norm_sqr() / n as f64).collect())
}

/// Unit-energy data taper.
#[derive(Debug, Clone, PartialEq)]
pub struct Taper {
    weights: Vec<f64>,
    time_bandwidth: Option<f64>,
    concentration: Option<f64>,
}

impl Taper {
    /// Constant taper 1/√N; the tapered estimate is then the periodogram.
    pub fn boxcar(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("taper length must be >= 1".into()));
        }
        Ok(Self {
            weights: vec![1.0 / (n as f64).sqrt(); n],
            time_bandwidth: None,
            concentration: None,
        })
    }

    /// Arbitrary weights, rescaled to unit energy.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let energy: f64 = weights.iter().map(|w| w * w).sum();
        if !(energy.is_finite() && energy > 0.0) {
            return Err(Error::Degenerate("taper has zero or non-finite energy".into()));
        }
        let s = energy.sqrt().recip();
        Ok(Self {
            weights: weights.into_iter().map(|w| w * s).collect(),
            time_bandwidth: None,
            concentration: None,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// NW for Slepian tapers.
    pub fn time_bandwidth(&self) -> Option<f64> {
        self.time_bandwidth
    }

    /// Fraction of energy inside |f| ≤ W for Slepian tapers.
    pub fn concentration(&self) -> Option<f64> {
        self.concentration
    }

    /// Autocorrelation ρ(τ) = Σ_n h_n h_{n+τ} for τ = 0..N−1.
    pub fn autocorrelation(&self) -> Vec<f64> {
        let n = self.weights.len();
        let len = (2 * n).next_power_of_two();
        let mut buf: Vec<Complex64> = self.weights.iter().map(|&w| Complex64::new(w, 0.0)).collect();
        buf.resize(len, Complex64::default());
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(len).process(&mut buf);
        for b in &mut buf {
            *b = Complex64::new(b.norm_sqr(), 0.0);
        }
        planner.plan_fft_inverse(len).process(&mut buf);
        buf[..n].iter().map(|c| c.re / len as f64).collect()
    }
}

/// The `order`-th discrete prolate spheroidal sequence of length n with
/// time-bandwidth product nw. Requires 1 ≤ nw < n/2 and order < 2nw.
pub fn slepian_taper(n: usize, nw: f64, order: usize) -> Result<Taper> {
    if !((order as f64) < 2.0 * nw) {
        return Err(Error::InvalidParams(format!(
            "taper order {order} is not usable with NW = {nw}; need order < 2NW"
        )));
    }
    Ok(slepian_tapers(n, nw, order + 1)?.pop().expect("nonempty"))
}

/// Slepian tapers of orders 0..count−1. Orders at or beyond 2NW are
/// computed but poorly concentrated.
pub fn slepian_tapers(n: usize, nw: f64, count: usize) -> Result<Vec<Taper>> {
    if n < 2 {
        return Err(Error::InvalidParams("taper length must be >= 2".into()));
    }
    if !(nw >= 1.0 && nw < n as f64 / 2.0) {
        return Err(Error::InvalidParams(format!(
            "need 1 <= NW < N/2, got NW = {nw} with N = {n}"
        )));
    }
    if count == 0 || count > n {
        return Err(Error::InvalidParams(format!(
            "taper count must be in 1..={n}, got {count}"
        )));
    }
    let w = nw / n as f64;
    let cw = (2.0 * PI * w).cos();
    let diag: Vec<f64> = (0..n)
        .map(|j| {
            let x = (n as f64 - 1.0 - 2.0 * j as f64) / 2.0;
            x * x * cw
        })
        .collect();
    // off[j] couples j−1 and j.
    let off: Vec<f64> = (0..n).map(|j| j as f64 * (n - j) as f64 / 2.0).collect();

    let mut out: Vec<Taper> = Vec::with_capacity(count);
    let mut previous: Vec<Vec<f64>> = Vec::with_capacity(count);
    for order in 0..count {
        let mu = kth_largest_eigenvalue(&diag, &off, order);
        let mut v = inverse_iteration(&diag, &off, mu, &previous);
        orient(&mut v, order);
        let mut taper = Taper {
            weights: v.clone(),
            time_bandwidth: Some(nw),
            concentration: None,
        };
        taper.concentration = Some(concentration(&taper.autocorrelation(), w));
        previous.push(v);
        out.push(taper);
    }
    Ok(out)
}

/// Number of eigenvalues of the tridiagonal matrix below x (Sturm count).
fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for j in 0..diag.len() {
        let e2 = if j == 0 { 0.0 } else { off[j] * off[j] };
        q = diag[j] - x - if j == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[j].abs() + off[j].abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn kth_largest_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..n {
        let r = off[j].abs() + if j + 1 < n { off[j + 1].abs() } else { 0.0 };
        lo = lo.min(diag[j] - r);
        hi = hi.max(diag[j] + r);
    }
    // The k-th largest has exactly n−1−k eigenvalues below it.
    let target = n - 1 - k;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(diag, off, mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector for the eigenvalue near `mu`, orthogonalized against
/// previously found vectors.
fn inverse_iteration(diag: &[f64], off: &[f64], mu: f64, previous: &[Vec<f64>]) -> Vec<f64> {
    let n = diag.len();
    let scale = diag.iter().map(|d| d.abs()).fold(0.0, f64::max) + off.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let shift = mu + scale * 1e-14;
    let mut v: Vec<f64> = (0..n).map(|j| 1.0 + 0.01 * ((j * 7 % 13) as f64)).collect();
    for _ in 0..4 {
        for p in previous {
            let d: f64 = p.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(p) {
                *x -= d * y;
            }
        }
        v = solve_shifted_tridiagonal(diag, off, shift, &v, scale);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
    }
    v
}

/// Solves (T − shift·I) x = b by Gaussian elimination with partial pivoting.
fn solve_shifted_tridiagonal(diag: &[f64], off: &[f64], shift: f64, b: &[f64], scale: f64) -> Vec<f64> {
    let n = diag.len();
    // Row i holds entries in columns i, i+1, i+2 after pivoting.
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut rhs = b.to_vec();
    let tiny = scale * f64::EPSILON;

    let mut a0 = diag[0] - shift;
    let mut a1 = if n > 1 { off[1] } else { 0.0 };
    let mut a2 = 0.0;
    for i in 0..n {
        if i + 1 < n {
            let b0 = off[i + 1];
            let b1 = diag[i + 1] - shift;
            let b2 = if i + 2 < n { off[i + 2] } else { 0.0 };
            if b0.abs() > a0.abs() {
                rhs.swap(i, i + 1);
                let m = a0 / b0;
                u0[i] = b0;
                u1[i] = b1;
                u2[i] = b2;
                let r = rhs[i + 1] - m * rhs[i];
                rhs[i + 1] = r;
                a0 = a1 - m * b1;
                a1 = a2 - m * b2;
            } else {
                let p = if a0 == 0.0 { tiny } else { a0 };
                let m = b0 / p;
                u0[i] = p;
                u1[i] = a1;
                u2[i] = a2;
                rhs[i + 1] -= m * rhs[i];
                a0 = b1 - m * a1;
                a1 = b2 - m * a2;
            }
            a2 = 0.0;
        } else {
            u0[i] = if a0 == 0.0 { tiny } else { a0 };
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * x[i + 2];
        }
        x[i] = s / u0[i];
    }
    x
}

/// Even orders: positive sum. Odd orders: positive first moment about the
/// center, i.e. the sequence starts positive.
fn orient(v: &mut [f64], order: usize) {
    let n = v.len();
    let s: f64 = if order % 2 == 0 {
        v.iter().sum()
    } else {
        v.iter()
            .enumerate()
            .map(|(j, x)| (n as f64 - 1.0 - 2.0 * j as f64) * x)
            .sum()
    };
    if s < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Energy fraction in |f| ≤ w from the taper autocorrelation.
fn concentration(rho: &[f64], w: f64) -> f64 {
    let mut s = 2.0 * w * rho[0];
    for (tau, r) in rho.iter().enumerate().skip(1) {
        let t = tau as f64;
        s += 2.0 * r * (2.0 * PI * w * t).sin() / (PI * t);
    }
    s
}

fn taper_spectrum_raw(z: &[Complex64], h: &[f64], fft: &Arc<dyn Fft<f64>>) -> Vec<f64> {
    let mut buf: Vec<Complex64> = z.iter().zip(h).map(|(z, h)| z * *h).collect();
    fft.process(&mut buf);
    buf.iter().map(|c| c.norm_sqr()).collect()
}

/// Tapered estimate |Σ h_n z_n e^{−i2πmn/N}|².
pub fn tapered_spectrum(z: &ComplexSeries, taper: &Taper) -> Result<SpectralEstimate> {
    if taper.len() != z.len() {
        return Err(Error::LengthMismatch {
            expected: z.len(),
            got: taper.len(),
        });
    }
    let fft = FftPlanner::new().plan_fft_forward(z.len());
    SpectralEstimate::new(z.dt(), taper_spectrum_raw(z.values(), taper.weights(), &fft))
}

/// Options for [`multitaper_spectrum`].
pub const ADAPTIVE_MAX_ITER: usize = 100;
pub const ADAPTIVE_TOL: f64 = 1e-8;

/// Multitaper estimate from Slepian tapers 0..k_tapers−1, averaged with
/// equal weights or with Thomson's adaptive weights.
pub fn multitaper_spectrum(z: &ComplexSeries, nw: f64, k_tapers: usize, adaptive: bool) -> Result<SpectralEstimate> {
    let tapers = slepian_tapers(z.len(), nw, k_tapers)?;
    multitaper_with(z, &tapers, adaptive)
}

/// [`multitaper_spectrum`] with precomputed tapers.
pub fn multitaper_with(z: &ComplexSeries, tapers: &[Taper], adaptive: bool) -> Result<SpectralEstimate> {
    let n = z.len();
    if tapers.is_empty() {
        return Err(Error::InvalidParams("no tapers supplied".into()));
    }
    if let Some(t) = tapers.iter().find(|t| t.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            got: t.len(),
        });
    }
    let mut warnings = Vec::new();
    if let Some(nw) = tapers[0].time_bandwidth() {
        if tapers.len() as f64 > 2.0 * nw - 1.0 {
            let msg = format!(
                "{} tapers exceed 2NW - 1 = {}; higher orders are poorly concentrated",
                tapers.len(),
                2.0 * nw - 1.0
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }
    let fft = FftPlanner::new().plan_fft_forward(n);
    let eigen: Vec<Vec<f64>> = tapers
        .iter()
        .map(|t| taper_spectrum_raw(z.values(), t.weights(), &fft))
        .collect();
    let k = eigen.len();
    let mut out = vec![0.0; n];
    if !adaptive || k == 1 {
        for e in &eigen {
            for (o, v) in out.iter_mut().zip(e) {
                *o += v / k as f64;
            }
        }
    } else {
        let lambdas: Vec<f64> = tapers
            .iter()
            .map(|t| t.concentration().unwrap_or(1.0).clamp(0.0, 1.0))
            .collect();
        let variance = z.values().iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
        let mut unconverged = 0usize;
        for m in 0..n {
            let mut s = 0.5 * (eigen[0][m] + eigen[1][m]);
            let mut done = false;
            for _ in 0..ADAPTIVE_MAX_ITER {
                let mut num = 0.0;
                let mut den = 0.0;
                for (e, &l) in eigen.iter().zip(&lambdas) {
                    let d = l.sqrt() * s / (l * s + (1.0 - l) * variance);
                    num += d * d * e[m];
                    den += d * d;
                }
                let next = if den > 0.0 { num / den } else { 0.0 };
                let change = (next - s).abs();
                s = next;
                if change <= ADAPTIVE_TOL * s.abs().max(f64::MIN_POSITIVE) {
                    done = true;
                    break;
                }
            }
            if !done {
                unconverged += 1;
            }
            out[m] = s;
        }
        if unconverged > 0 {
            let msg = format!("adaptive weights did not converge at {unconverged} frequencies");
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }
    Ok(SpectralEstimate::new(z.dt(), out)?.with_warnings(warnings))
}

/// Precomputed pieces for evaluating expected tapered spectra repeatedly on
/// one grid: the taper autocorrelation and an FFT plan.
pub struct ExpectedSpectrumKernel {
    dt: f64,
    rho: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for ExpectedSpectrumKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExpectedSpectrumKernel")
            .field("dt", &self.dt)
            .field("n", &self.rho.len())
            .finish()
    }
}

impl ExpectedSpectrumKernel {
    pub fn new(taper: &Taper, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParams(format!("sample interval must be > 0, got {dt}")));
        }
        Ok(Self {
            dt,
            rho: taper.autocorrelation(),
            fft: FftPlanner::new().plan_fft_forward(taper.len()),
        })
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Expected estimate for the lags R(0), R(Δ), ..., R((N−1)Δ).
    pub fn from_acvs(&self, acvs: &[Complex64]) -> Result<SpectralEstimate> {
        let n = self.rho.len();
        if acvs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: acvs.len(),
            });
        }
        let mut buf = vec![Complex64::default(); n];
        buf[0] = acvs[0] * self.rho[0];
        for j in 1..n {
            buf[j] = acvs[j] * self.rho[j] + acvs[n - j].conj() * self.rho[n - j];
        }
        self.fft.process(&mut buf);
        let values = buf
            .iter()
            .map(|c| {
                // Negative values are roundoff around a true value ≥ 0.
                if c.re < 0.0 {
                    0.0
                } else {
                    c.re
                }
            })
            .collect();
        SpectralEstimate::new(self.dt, values)
    }

    /// Expected estimate for a Matérn process.
    pub fn matern(&self, p: &ProcessParams) -> Result<SpectralEstimate> {
        let acvs = (0..self.rho.len())
            .map(|j| autocovariance(p, j as f64 * self.dt))
            .collect::<Result<Vec<_>>>()?;
        self.from_acvs(&acvs)
    }
}

/// Expected tapered estimate E Ŝ_h[m] = Σ_τ ρ_h(τ) R(τΔ) e^{−i2πmτ/N}.
pub fn expected_tapered_spectrum(p: &ProcessParams, taper: &Taper, n: usize, dt: f64) -> Result<SpectralEstimate> {
    if taper.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: taper.len(),
        });
    }
    if !(p.lambda() > 0.0) {
        return Err(Error::InvalidParams("expected spectrum requires lambda > 0".into()));
    }
    ExpectedSpectrumKernel::new(taper, dt)?.matern(p)
}

/// Aliased spectrum (1/Δ) Σ_{|j|≤terms} S(ω + 2πj/Δ), in the per-sample
/// normalization of the estimators.
pub fn aliased_spectrum(p: &ProcessParams, omega: f64, dt: f64, terms: usize) -> Result<f64> {
    let mut s = 0.0;
    for j in -(terms as i64)..=terms as i64 {
        s += spectrum(p, omega + 2.0 * PI * j as f64 / dt)?;
    }
    Ok(s / dt)
}

/// Model spectrum sampled on the Fourier grid, S(ω_m)/Δ.
pub fn sampled_spectrum(p: &ProcessParams, n: usize, dt: f64) -> Result<SpectralEstimate> {
    let values = (0..n)
        .map(|m| spectrum(p, fourier_frequency(m, n, dt)).map(|s| s / dt))
        .collect::<Result<Vec<_>>>()?;
    SpectralEstimate::new(dt, values)
}
