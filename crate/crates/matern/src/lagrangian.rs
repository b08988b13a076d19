//! Trajectory diagnostics: velocity/displacement conversion, dispersion,
//! diffusivity and spin screening.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::ComplexSeries;

/// Displacement series sharing one grid, each starting at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble {
    dt: f64,
    members: Vec<ComplexSeries>,
}

impl TrajectoryEnsemble {
    /// Positions are shifted so that every member starts at 0.
    pub fn new(members: Vec<ComplexSeries>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::Degenerate("ensemble has no members".into()))?;
        let (dt, n) = (first.dt(), first.len());
        let mut shifted = Vec::with_capacity(members.len());
        for (i, m) in members.into_iter().enumerate() {
            if m.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: m.len(),
                });
            }
            if m.dt() != dt {
                return Err(Error::InvalidParams(format!(
                    "member {i} has sample interval {} but member 0 has {dt}",
                    m.dt()
                )));
            }
            let r0 = m.values()[0];
            shifted.push(ComplexSeries::new(dt, m.values().iter().map(|r| r - r0).collect())?);
        }
        Ok(Self { dt, members: shifted })
    }

    /// Integrates each velocity series.
    pub fn from_velocities(velocities: &[ComplexSeries]) -> Result<Self> {
        Self::new(velocities.iter().map(integrate_velocity).collect())
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn members(&self) -> &[ComplexSeries] {
        &self.members
    }

    /// Samples per member.
    pub fn len(&self) -> usize {
        self.members[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ensemble mean of |r(nΔ)|² for every n.
    pub fn mean_square_displacement(&self) -> Vec<f64> {
        let n = self.len();
        let count = self.members.len() as f64;
        let mut out = vec![0.0; n];
        for m in &self.members {
            for (o, r) in out.iter_mut().zip(m.values()) {
                *o += r.norm_sqr();
            }
        }
        for o in &mut out {
            *o /= count;
        }
        out
    }
}

/// Left-Riemann cumulative sum r_n = Δ Σ_{j<n} z_j, r_0 = 0, same length.
pub fn integrate_velocity(z: &ComplexSeries) -> ComplexSeries {
    let dt = z.dt();
    let mut acc = Complex64::default();
    let r = z
        .values()
        .iter()
        .map(|v| {
            let cur = acc;
            acc += v * dt;
            cur
        })
        .collect();
    ComplexSeries::new(dt, r).expect("finite partial sums of finite values")
}

/// Central differences (r_{n+1} − r_{n−1})/(2Δ) inside, one-sided at the ends.
pub fn differentiate_position(r: &ComplexSeries) -> Result<ComplexSeries> {
    let v = r.values();
    let n = v.len();
    if n < 3 {
        return Err(Error::Degenerate("differentiation needs at least 3 samples".into()));
    }
    let dt = r.dt();
    let mut z = Vec::with_capacity(n);
    z.push((v[1] - v[0]) / dt);
    for i in 1..n - 1 {
        z.push((v[i + 1] - v[i - 1]) / (2.0 * dt));
    }
    z.push((v[n - 1] - v[n - 2]) / dt);
    ComplexSeries::new(dt, z)
}

/// (t, r̃) with r̃ the root-mean-square displacement at every `stride`-th sample.
pub fn dispersion_curve(ens: &TrajectoryEnsemble, stride: usize) -> Result<Vec<(f64, f64)>> {
    if stride == 0 {
        return Err(Error::InvalidParams("stride must be >= 1".into()));
    }
    let msd = ens.mean_square_displacement();
    Ok((0..msd.len())
        .step_by(stride)
        .map(|n| (n as f64 * ens.dt, msd[n].sqrt()))
        .collect())
}

/// κ̂ = ¼ × least-squares slope of mean |r|² against t over samples with
/// t in [t_start, t_end].
pub fn empirical_diffusivity(ens: &TrajectoryEnsemble, window: (f64, f64)) -> Result<f64> {
    let (t0, t1) = window;
    let msd = ens.mean_square_displacement();
    let tol = 1e-9 * ens.dt;
    let points: Vec<(f64, f64)> = msd
        .iter()
        .enumerate()
        .map(|(n, &m)| (n as f64 * ens.dt, m))
        .filter(|&(t, _)| t >= t0 - tol && t <= t1 + tol)
        .collect();
    if points.len() < 2 {
        return Err(Error::Degenerate(format!(
            "window [{t0}, {t1}] holds {} samples of a record of duration {}; need at least 2",
            points.len(),
            (msd.len() - 1) as f64 * ens.dt
        )));
    }
    let k = points.len() as f64;
    let tm = points.iter().map(|p| p.0).sum::<f64>() / k;
    let ym = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|(t, y)| (t - tm) * (y - ym)).sum();
    let sxx: f64 = points.iter().map(|(t, _)| (t - tm) * (t - tm)).sum();
    Ok(0.25 * sxy / sxx)
}

/// Spin parameter mean(Im{z* dz/dt}) / mean(|z|²), with the derivative from
/// central differences (one-sided at the ends).
pub fn spin_parameter(z: &ComplexSeries) -> Result<f64> {
    let dz = differentiate_position(z)?;
    let num: f64 = z.values().iter().zip(dz.values()).map(|(a, b)| (a.conj() * b).im).sum();
    let den: f64 = z.values().iter().map(|a| a.norm_sqr()).sum();
    if !(den > 0.0) {
        return Err(Error::Degenerate("spin parameter of a zero series".into()));
    }
    Ok(num / den)
}

/// Splits series into (kept, discarded) index lists: the ceil(fraction·count)
/// series of smallest |spin| are kept. Both lists are in ascending index order.
pub fn screen_by_spin(velocities: &[ComplexSeries], keep_fraction: f64) -> Result<(Vec<usize>, Vec<usize>)> {
    if velocities.is_empty() {
        return Err(Error::Degenerate("no series to screen".into()));
    }
    if !(keep_fraction > 0.0 && keep_fraction <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "keep fraction must be in (0, 1], got {keep_fraction}"
        )));
    }
    let spins = velocities
        .iter()
        .map(|z| spin_parameter(z).map(f64::abs))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..velocities.len()).collect();
    order.sort_by(|&a, &b| spins[a].total_cmp(&spins[b]).then(a.cmp(&b)));
    let keep = ((keep_fraction * velocities.len() as f64).ceil() as usize).min(velocities.len());
    let mut kept = order[..keep].to_vec();
    let mut dropped = order[keep..].to_vec();
    kept.sort_unstable();
    dropped.sort_unstable();
    Ok((kept, dropped))
}

/// Removes jumps larger than half the domain width along each axis of a
/// position series in a periodic domain.
pub fn unwrap_periodic(r: &ComplexSeries, width_x: f64, width_y: f64) -> Result<ComplexSeries> {
    if !(width_x > 0.0 && width_y > 0.0) {
        return Err(Error::InvalidParams("domain widths must be > 0".into()));
    }
    let unwrap_axis = |x: &mut [f64], w: f64| {
        let mut offset = 0.0;
        let mut prev = x[0];
        for v in x.iter_mut().skip(1) {
            let raw = *v;
            let jump = raw - prev;
            offset -= w * (jump / w).round();
            prev = raw;
            *v = raw + offset;
        }
    };
    let mut xs: Vec<f64> = r.values().iter().map(|c| c.re).collect();
    let mut ys: Vec<f64> = r.values().iter().map(|c| c.im).collect();
    unwrap_axis(&mut xs, width_x);
    unwrap_axis(&mut ys, width_y);
    ComplexSeries::new(
        r.dt(),
        xs.into_iter().zip(ys).map(|(x, y)| Complex64::new(x, y)).collect(),
    )
}
