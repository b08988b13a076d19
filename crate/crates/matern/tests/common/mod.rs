//! Independent numerical oracles shared by the integration suites.
#![allow(dead_code)]

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let mut stack = vec![(a, b, 0usize)];
    let mut total = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(&f, lo, hi);
        if err <= tol * v.abs().max(1e-300) || depth > 60 || err < 1e-300 {
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// ∫_a^∞ f via the map t = a + s/(1−s).
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> f64 {
    integrate(
        |s| {
            if s >= 1.0 {
                return 0.0;
            }
            let t = a + s / (1.0 - s);
            let jac = 1.0 / ((1.0 - s) * (1.0 - s));
            f(t) * jac
        },
        0.0,
        1.0,
        tol,
    )
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
pub fn wynn_epsilon(partial: &[f64]) -> f64 {
    let n = partial.len();
    let mut e0: Vec<f64> = vec![0.0; n + 1];
    let mut e1: Vec<f64> = partial.to_vec();
    let mut best = *partial.last().unwrap();
    let mut k = 0;
    while e1.len() > 1 {
        let mut next = Vec::with_capacity(e1.len() - 1);
        for i in 0..e1.len() - 1 {
            let d = e1[i + 1] - e1[i];
            if d == 0.0 {
                return e1[i + 1];
            }
            next.push(e0[i + 1] + 1.0 / d);
        }
        k += 1;
        if k % 2 == 0 {
            best = *next.last().unwrap();
        }
        e0 = e1;
        e1 = next;
    }
    best
}

/// ∫_0^∞ f(ω) cos(ωτ) dω for slowly decaying f, by half-period panels and
/// Wynn acceleration of the alternating panel sums.
pub fn fourier_cos_integral<F: Fn(f64) -> f64>(f: F, tau: f64, tol: f64) -> f64 {
    let half = std::f64::consts::PI / tau;
    // The first panel starts after the first zero of the cosine.
    let first = integrate(|w| f(w) * (w * tau).cos(), 0.0, 0.5 * half, tol);
    let mut sums = Vec::new();
    let mut acc = first;
    let mut lo = 0.5 * half;
    for _ in 0..40 {
        let hi = lo + half;
        acc += integrate(|w| f(w) * (w * tau).cos(), lo, hi, tol);
        sums.push(acc);
        lo = hi;
    }
    wynn_epsilon(&sums)
}

/// Brute-force Hermitian Toeplitz Cholesky used to cross-check sampling.
pub fn dense_cholesky(a: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut l = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        let mut d = a[j][j].re;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        let djj = d.sqrt();
        l[j][j] = Complex64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / djj;
        }
    }
    l
}

/// Median of a slice (averaging the middle pair for even lengths).
pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample standard deviation.
pub fn std_dev(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)).sqrt()
}
