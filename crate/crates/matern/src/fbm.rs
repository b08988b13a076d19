//! Fractional Brownian motion and fractional Gaussian noise.
//!
//! fBm with spectral amplitude A and slope 1/2 < α < 3/2 starts at zero and
//! has covariance (V_α/2) A² [|t+τ|^{2α−1} + |t|^{2α−1} − |τ|^{2α−1}].

use crate::error::{domain, Error, Result};
use crate::model::{fbm_v, ProcessParams};
use crate::series::ComplexSeries;

/// Parameters (A, α) of fractional Brownian motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbmParams {
    amplitude: f64,
    alpha: f64,
    v: f64,
}

impl FbmParams {
    pub fn new(amplitude: f64, alpha: f64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(Error::InvalidParams(format!(
                "fBm amplitude must be > 0, got {amplitude}"
            )));
        }
        if !(alpha > 0.5 && alpha < 1.5) {
            return Err(Error::InvalidParams(format!(
                "fBm requires 1/2 < alpha < 3/2, got {alpha}"
            )));
        }
        Ok(Self {
            amplitude,
            alpha,
            v: fbm_v(alpha)?,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Hurst parameter H = α − 1/2.
    pub fn hurst(&self) -> f64 {
        self.alpha - 0.5
    }

    /// V_α.
    pub fn v(&self) -> f64 {
        self.v
    }

    fn half_v_a2(&self) -> f64 {
        0.5 * self.v * self.amplitude * self.amplitude
    }

    fn pow(&self, x: f64) -> f64 {
        let x = x.abs();
        if x == 0.0 {
            0.0
        } else {
            x.powf(2.0 * self.alpha - 1.0)
        }
    }
}

/// Covariance E[z(t+τ) z*(t)] of fBm started at z(0) = 0.
pub fn fbm_covariance(p: &FbmParams, t: f64, tau: f64) -> f64 {
    p.half_v_a2() * (p.pow(t + tau) + p.pow(t) - p.pow(tau))
}

/// Variogram ½E|z(t+τ) − z(t)|² = (V_α/2) A² |τ|^{2α−1}.
pub fn fbm_variogram(p: &FbmParams, tau: f64) -> f64 {
    p.half_v_a2() * p.pow(tau)
}

/// Time-averaged spectrum A²/|ω|^{2α}.
pub fn fbm_time_averaged_spectrum(p: &FbmParams, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::Singular("fbm_time_averaged_spectrum"));
    }
    Ok(p.amplitude * p.amplitude / omega.abs().powf(2.0 * p.alpha))
}

/// Autocovariance of fractional Gaussian noise, the increments of fBm over
/// steps of length `delta`.
pub fn fgn_autocovariance(p: &FbmParams, tau: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(domain("fgn_autocovariance", format!("requires delta > 0, got {delta}")));
    }
    Ok(p.half_v_a2() * (p.pow(tau + delta) + p.pow(tau - delta) - 2.0 * p.pow(tau)))
}

/// Result of [`fbm_rescale`]: the rescaled series and its amplitude factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Rescaled {
    pub series: ComplexSeries,
    /// β^{α−1/2}.
    pub aspect_ratio: f64,
}

/// Self-affine rescaling z̃(t) = β^{α−1/2} z(t/β) without interpolation.
///
/// An integer β ≥ 1 stretches the time axis (sample interval βΔ, same
/// samples). β = 1/j for an integer j keeps Δ and takes every j-th sample.
/// Any other β would need interpolation and is rejected.
pub fn fbm_rescale(series: &ComplexSeries, p: &FbmParams, beta: f64) -> Result<Rescaled> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(domain("fbm_rescale", format!("requires beta > 0, got {beta}")));
    }
    let aspect_ratio = beta.powf(p.alpha - 0.5);
    let near_int = |x: f64| (x - x.round()).abs() <= 1e-12 * x.max(1.0);
    let (dt, values): (f64, Vec<_>) = if beta >= 1.0 && near_int(beta) {
        (
            series.dt() * beta.round(),
            series.values().iter().map(|z| z * aspect_ratio).collect(),
        )
    } else if beta < 1.0 && near_int(1.0 / beta) {
        let j = (1.0 / beta).round() as usize;
        (
            series.dt(),
            series.values().iter().step_by(j).map(|z| z * aspect_ratio).collect(),
        )
    } else {
        return Err(domain(
            "fbm_rescale",
            format!("beta = {beta} is neither an integer nor the reciprocal of one; the grid cannot be rescaled without interpolation"),
        ));
    };
    Ok(Rescaled {
        series: ComplexSeries::new(dt, values)?,
        aspect_ratio,
    })
}

/// Matérn stand-in for a power law of slope α over a record of length
/// `duration`: damping λ = 2π/duration, same spectral amplitude.
pub fn approximate_power_law(amplitude: f64, alpha: f64, duration: f64) -> Result<ProcessParams> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(domain(
            "approximate_power_law",
            format!("requires duration > 0, got {duration}"),
        ));
    }
    ProcessParams::from_amplitude(amplitude, alpha, 2.0 * std::f64::consts::PI / duration, 0.0)
}
