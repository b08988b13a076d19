use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniformly sampled complex time series z_n = z(nΔ).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    dt: f64,
    values: Vec<Complex64>,
}

impl ComplexSeries {
    /// Requires at least one sample, `dt > 0` and finite values.
    pub fn new(dt: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParams(format!("sample interval must be > 0, got {dt}")));
        }
        if values.is_empty() {
            return Err(Error::Degenerate("series has no samples".into()));
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Degenerate(format!("non-finite sample at index {i}")));
        }
        Ok(Self { dt, values })
    }

    /// Real-valued series.
    pub fn from_real(dt: f64, values: &[f64]) -> Result<Self> {
        Self::new(dt, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample times nΔ.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |n| n as f64 * self.dt)
    }

    /// Same grid with the sample mean subtracted.
    pub fn demeaned(&self) -> Self {
        let mean = self.values.iter().sum::<Complex64>() / self.values.len() as f64;
        Self {
            dt: self.dt,
            values: self.values.iter().map(|z| z - mean).collect(),
        }
    }

    /// Same samples with a new sample interval.
    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(dt, self.values.clone())
    }
}
