//! Closed-form quantities of the Matérn and oscillatory Matérn family.
//!
//! The spectrum is
//!
//! ```text
//! S(ω) = A² / ((ω − Ω)² + λ²)^α = (λ^{2α−1} / c_α) σ² / ((ω − Ω)² + λ²)^α
//! ```
//!
//! with `c_α = B(1/2, α − 1/2) / (2π)`. Frequencies are in radians per unit
//! time throughout.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::specfun::{bessel_k_full, ln_beta, ln_gamma_pos};

/// Parameters (σ, α, λ, Ω) of a Matérn or oscillatory Matérn process.
///
/// σ is canonical; the spectral amplitude A is kept in step. The damping may
/// be zero only for the power-law (fBm) limit, built with
/// [`ProcessParams::from_amplitude`], in which case σ is infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessParams {
    sigma: f64,
    amplitude: f64,
    alpha: f64,
    lambda: f64,
    omega: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.5) {
        return Err(Error::InvalidParams(format!(
            "slope parameter alpha must exceed 1/2, got {alpha}"
        )));
    }
    Ok(())
}

impl ProcessParams {
    /// Oscillatory Matérn with standard deviation `sigma` and spin `omega`.
    pub fn new(sigma: f64, alpha: f64, lambda: f64, omega: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "sigma must be finite and >= 0, got {sigma}"
            )));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParams(format!(
                "damping lambda must be > 0 when sigma is given, got {lambda}; \
                 use from_amplitude for the power-law limit"
            )));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidParams(format!("spin omega must be finite, got {omega}")));
        }
        let ln_a = sigma.ln() + (alpha - 0.5) * lambda.ln() - 0.5 * ln_matern_c(alpha);
        Ok(Self {
            sigma,
            amplitude: ln_a.exp(),
            alpha,
            lambda,
            omega,
        })
    }

    /// Non-spinning Matérn process.
    pub fn matern(sigma: f64, alpha: f64, lambda: f64) -> Result<Self> {
        Self::new(sigma, alpha, lambda, 0.0)
    }

    /// Construction from the spectral amplitude A. `lambda = 0` gives the
    /// power-law limit and then requires 1/2 < α < 3/2.
    pub fn from_amplitude(amplitude: f64, alpha: f64, lambda: f64, omega: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "amplitude must be finite and >= 0, got {amplitude}"
            )));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "damping lambda must be >= 0, got {lambda}"
            )));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidParams(format!("spin omega must be finite, got {omega}")));
        }
        let sigma = if lambda == 0.0 {
            if alpha >= 1.5 {
                return Err(Error::InvalidParams(format!(
                    "zero damping requires 1/2 < alpha < 3/2, got {alpha}"
                )));
            }
            f64::INFINITY
        } else {
            (amplitude.ln() - (alpha - 0.5) * lambda.ln() + 0.5 * ln_matern_c(alpha)).exp()
        };
        Ok(Self {
            sigma,
            amplitude,
            alpha,
            lambda,
            omega,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Hurst parameter H = α − 1/2.
    pub fn hurst(&self) -> f64 {
        self.alpha - 0.5
    }

    /// Same process with a different spin.
    pub fn with_omega(self, omega: f64) -> Result<Self> {
        if self.lambda == 0.0 {
            Self::from_amplitude(self.amplitude, self.alpha, 0.0, omega)
        } else {
            Self::new(self.sigma, self.alpha, self.lambda, omega)
        }
    }

    /// Same process with a different standard deviation.
    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        Self::new(sigma, self.alpha, self.lambda, self.omega)
    }

    fn require_damped(&self, func: &'static str) -> Result<()> {
        if self.lambda > 0.0 {
            Ok(())
        } else {
            Err(domain(
                func,
                "requires lambda > 0; the undamped limit is fractional Brownian motion (see the fbm module)",
            ))
        }
    }
}

pub(crate) fn ln_matern_c(alpha: f64) -> f64 {
    // ln B(1/2, α−1/2) − ln 2π; α > 1/2 is checked by callers.
    ln_gamma_pos(0.5) + ln_gamma_pos(alpha - 0.5) - ln_gamma_pos(alpha) - (2.0 * PI).ln()
}

/// Normalizing constant c_α = B(1/2, α − 1/2)/(2π).
pub fn matern_c(alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.5) {
        return Err(domain("matern_c", format!("requires alpha > 1/2, got {alpha}")));
    }
    Ok((ln_beta(0.5, alpha - 0.5)? - (2.0 * PI).ln()).exp())
}

/// V_α = Γ(α−1/2)Γ(3/2−α)/(π Γ(2α)), the fBm variance coefficient.
pub fn fbm_v(alpha: f64) -> Result<f64> {
    if !(alpha > 0.5 && alpha < 1.5) {
        return Err(domain("fbm_v", format!("requires 1/2 < alpha < 3/2, got {alpha}")));
    }
    Ok((ln_gamma_pos(alpha - 0.5) + ln_gamma_pos(1.5 - alpha) - ln_gamma_pos(2.0 * alpha)).exp() / PI)
}

/// ln S(ω); finite wherever the spectrum is positive.
pub fn ln_spectrum(p: &ProcessParams, omega: f64) -> Result<f64> {
    let d = omega - p.omega;
    let q = d * d + p.lambda * p.lambda;
    if q == 0.0 {
        return Err(Error::Singular("spectrum"));
    }
    Ok(2.0 * p.amplitude.ln() - p.alpha * q.ln())
}

/// Two-sided rotary spectral density S(ω) = A²/((ω−Ω)²+λ²)^α.
pub fn spectrum(p: &ProcessParams, omega: f64) -> Result<f64> {
    ln_spectrum(p, omega).map(f64::exp)
}

/// Matérn function M_α(x) = 2/(Γ(α−1/2) 2^{α−1/2}) |x|^{α−1/2} K_{α−1/2}(|x|),
/// normalized so M_α(0) = 1. Underflows gracefully to 0.
pub fn matern_function(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha).map_err(|_| domain("matern_function", format!("requires alpha > 1/2, got {alpha}")))?;
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(1.0);
    }
    if !ax.is_finite() {
        return if ax.is_infinite() {
            Ok(0.0)
        } else {
            Err(domain("matern_function", "argument is NaN"))
        };
    }
    let nu = (alpha - 0.5).abs();
    let k = bessel_k_full(nu, ax)?;
    let ln_m = LN_2 - ln_gamma_pos(alpha - 0.5) - (alpha - 0.5) * LN_2 + (alpha - 0.5) * ax.ln() + k.ln_value;
    // Roundoff can push the log a hair above zero for tiny arguments.
    Ok(ln_m.exp().min(1.0))
}

/// Autocovariance R(τ) = σ² e^{iΩτ} M_α(λτ).
pub fn autocovariance(p: &ProcessParams, tau: f64) -> Result<Complex64> {
    p.require_damped("autocovariance")?;
    let m = matern_function(p.alpha, p.lambda * tau)?;
    let mag = p.sigma * p.sigma * m;
    if p.omega == 0.0 {
        return Ok(Complex64::new(mag, 0.0));
    }
    Ok(Complex64::from_polar(mag, p.omega * tau))
}

/// Small-lag approximation σ²[1 − (λ|τ|/2)^{2α−1} Γ(3/2−α)/Γ(α+1/2)] of the
/// non-spinning autocovariance, valid for 1/2 < α < 3/2.
pub fn acvs_small_tau(p: &ProcessParams, tau: f64) -> Result<f64> {
    p.require_damped("acvs_small_tau")?;
    if p.alpha >= 1.5 {
        return Err(domain(
            "acvs_small_tau",
            format!(
                "requires alpha < 3/2 (the τ² term dominates otherwise), got {}",
                p.alpha
            ),
        ));
    }
    let x = 0.5 * p.lambda * tau.abs();
    let coef = (ln_gamma_pos(1.5 - p.alpha) - ln_gamma_pos(p.alpha + 0.5)).exp();
    Ok(p.sigma * p.sigma * (1.0 - x.powf(2.0 * p.alpha - 1.0) * coef))
}

/// Large-lag approximation σ² √(2π)/(Γ(α−1/2) 2^{α−1/2}) |λτ|^{α−1} e^{−λ|τ|}
/// of the non-spinning autocovariance.
pub fn acvs_large_tau(p: &ProcessParams, tau: f64) -> Result<f64> {
    p.require_damped("acvs_large_tau")?;
    let x = (p.lambda * tau).abs();
    let ln_pre = 0.5 * (2.0 * PI).ln() - ln_gamma_pos(p.alpha - 0.5) - (p.alpha - 0.5) * LN_2;
    Ok(p.sigma * p.sigma * (ln_pre + (p.alpha - 1.0) * x.ln() - x).exp())
}

/// Process variance σ² = c_α A²/λ^{2α−1}.
pub fn variance(p: &ProcessParams) -> Result<f64> {
    p.require_damped("variance")?;
    Ok(p.sigma * p.sigma)
}

/// Diffusivity κ = S(0)/4; equals A²/(4λ^{2α}) = σ²/(4λc_α) without spin.
pub fn diffusivity(p: &ProcessParams) -> Result<f64> {
    if p.lambda == 0.0 && p.omega == 0.0 {
        return Err(domain(
            "diffusivity",
            "unbounded for lambda = 0 (the fBm limit has neither finite variance nor diffusivity)",
        ));
    }
    Ok(spectrum(p, 0.0)? / 4.0)
}

/// Green's function g(t) = t^{α−1} e^{iΩt} e^{−λt}/Γ(α), zero for t < 0.
///
/// At t = 0 the value is +∞ for α < 1, 1 for α = 1 and 0 for α > 1.
pub fn greens_function(p: &ProcessParams, t: f64) -> Complex64 {
    if t < 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if t == 0.0 {
        let v = if p.alpha < 1.0 {
            f64::INFINITY
        } else if p.alpha == 1.0 {
            1.0
        } else {
            0.0
        };
        return Complex64::new(v, 0.0);
    }
    let mag = ((p.alpha - 1.0) * t.ln() - p.lambda * t - ln_gamma_pos(p.alpha)).exp();
    Complex64::from_polar(mag, p.omega * t)
}

/// Green's function scaled by λ^{α−1/2}/√c_α so that σ g̃ driven by unit
/// white noise has variance σ².
pub fn normalized_greens_function(p: &ProcessParams, t: f64) -> Result<Complex64> {
    p.require_damped("normalized_greens_function")?;
    let s = ((p.alpha - 0.5) * p.lambda.ln() - 0.5 * ln_matern_c(p.alpha)).exp();
    Ok(greens_function(p, t) * s)
}

/// Transfer function G(ω) = (i(ω−Ω) + λ)^{−α}, principal branch.
pub fn transfer_function(p: &ProcessParams, omega: f64) -> Result<Complex64> {
    p.require_damped("transfer_function")?;
    Ok(Complex64::new(p.lambda, omega - p.omega).powf(-p.alpha))
}

/// Fractal dimension 5/2 − α for α < 3/2, otherwise 1.
pub fn fractal_dimension(alpha: f64) -> Result<f64> {
    check_alpha(alpha).map_err(|_| domain("fractal_dimension", format!("requires alpha > 1/2, got {alpha}")))?;
    Ok(if alpha < 1.5 { 2.5 - alpha } else { 1.0 })
}

/// Spectral families combining short/long memory with the three
/// diffusiveness classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemoryFamily {
    /// 4λ^{2α}/(ω²+λ²)^α: short memory, diffusive with κ = 1.
    Matern,
    /// ω²/(ω²+λ²)^α: short memory, subdiffusive.
    ShortSubdiffusive,
    /// 1/(|ω|^{2β}(ω²+λ²)^α): long memory, superdiffusive.
    LongSuperdiffusive,
    /// 4Ω^{2β}(Ω²+λ²)^α/(|ω−Ω|^{2β}(|ω−Ω|²+λ²)^α): long memory, diffusive with κ = 1.
    LongDiffusive,
    /// ω²/(|ω−Ω|^{2β}(|ω−Ω|²+λ²)^α): long memory, subdiffusive.
    LongSubdiffusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diffusiveness {
    Diffusive,
    Subdiffusive,
    Superdiffusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Memory {
    Short,
    Long,
}

/// A member of one of the [`MemoryFamily`] spectral forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryClassSpectrum {
    family: MemoryFamily,
    alpha: f64,
    beta: f64,
    lambda: f64,
    omega: f64,
}

impl MemoryClassSpectrum {
    /// Validates the stationarity range of the family. `beta` is ignored by
    /// the short-memory families and `omega` by all but the spinning ones.
    pub fn new(family: MemoryFamily, alpha: f64, beta: f64, lambda: f64, omega: f64) -> Result<Self> {
        let bad = |why: String| Err(Error::InvalidParams(format!("{family:?}: {why}")));
        if !(lambda.is_finite() && lambda > 0.0) {
            return bad(format!("requires lambda > 0 for finite variance, got {lambda}"));
        }
        match family {
            MemoryFamily::Matern if !(alpha > 0.5) => return bad(format!("requires alpha > 1/2, got {alpha}")),
            MemoryFamily::ShortSubdiffusive if !(alpha > 1.5) => {
                return bad(format!("requires alpha > 3/2, got {alpha}"))
            }
            MemoryFamily::LongSuperdiffusive | MemoryFamily::LongDiffusive | MemoryFamily::LongSubdiffusive => {
                if !(beta > 0.0 && beta < 0.5) {
                    return bad(format!("requires 0 < beta < 1/2, got {beta}"));
                }
                let floor = if family == MemoryFamily::LongSubdiffusive {
                    1.5
                } else {
                    0.5
                };
                if !(alpha + beta > floor) {
                    return bad(format!("requires alpha + beta > {floor}, got {}", alpha + beta));
                }
                if family != MemoryFamily::LongSuperdiffusive && !(omega != 0.0 && omega.is_finite()) {
                    return bad("requires a finite nonzero spin omega".into());
                }
            }
            _ => {}
        }
        Ok(Self {
            family,
            alpha,
            beta,
            lambda,
            omega,
        })
    }

    pub fn family(&self) -> MemoryFamily {
        self.family
    }
}

/// Evaluates the tabulated spectral form at ω. Singular points return +∞.
pub fn taxonomy_spectrum(s: &MemoryClassSpectrum, omega: f64) -> f64 {
    let (a, b, l, o) = (s.alpha, s.beta, s.lambda, s.omega);
    let l2 = l * l;
    match s.family {
        MemoryFamily::Matern => 4.0 * (a * (l2 / (omega * omega + l2)).ln()).exp(),
        MemoryFamily::ShortSubdiffusive => omega * omega / (omega * omega + l2).powf(a),
        MemoryFamily::LongSuperdiffusive => {
            if omega == 0.0 {
                return f64::INFINITY;
            }
            1.0 / (omega.abs().powf(2.0 * b) * (omega * omega + l2).powf(a))
        }
        MemoryFamily::LongDiffusive => {
            let d = (omega - o).abs();
            if d == 0.0 {
                return f64::INFINITY;
            }
            4.0 * (2.0 * b * (o.abs() / d).ln() + a * ((o * o + l2) / (d * d + l2)).ln()).exp()
        }
        MemoryFamily::LongSubdiffusive => {
            let d = (omega - o).abs();
            if d == 0.0 {
                return f64::INFINITY;
            }
            omega * omega / (d.powf(2.0 * b) * (d * d + l2).powf(a))
        }
    }
}

/// Diffusiveness and memory class of the spectral form.
pub fn classify(s: &MemoryClassSpectrum) -> (Diffusiveness, Memory) {
    match s.family {
        MemoryFamily::Matern => (Diffusiveness::Diffusive, Memory::Short),
        MemoryFamily::ShortSubdiffusive => (Diffusiveness::Subdiffusive, Memory::Short),
        MemoryFamily::LongSuperdiffusive => (Diffusiveness::Superdiffusive, Memory::Long),
        MemoryFamily::LongDiffusive => (Diffusiveness::Diffusive, Memory::Long),
        MemoryFamily::LongSubdiffusive => (Diffusiveness::Subdiffusive, Memory::Long),
    }
}
