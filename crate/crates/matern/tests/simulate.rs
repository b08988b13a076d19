mod common;

use matern::fbm::FbmParams;
use matern::model::{autocovariance, ProcessParams};
use matern::simulate::*;
use matern::spectral::{multitaper_with, slepian_tapers};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn covariance_examples() {
    let p = ProcessParams::matern(1.0, 1.0, 1.0).unwrap();
    let m = build_covariance(&CovarianceModel::Matern(p), 2, 2f64.ln()).unwrap();
    assert!(m.is_real() && m.is_toeplitz());
    for (i, j, want) in [(0, 0, 1.0), (0, 1, 0.5), (1, 0, 0.5), (1, 1, 1.0)] {
        assert!((m.entry(i, j) - c(want)).norm() < 1e-15);
    }

    let b = FbmParams::new(1.0, 1.0).unwrap();
    let m = build_covariance(&CovarianceModel::Fbm(b), 3, 1.0).unwrap();
    assert!(!m.is_toeplitz());
    let want = [[0.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 1.0, 2.0]];
    for i in 0..3 {
        for j in 0..3 {
            assert!((m.entry(i, j) - c(want[i][j])).norm() < 1e-14);
        }
    }

    let steep = ProcessParams::matern(1.0, 4.0, 0.1).unwrap();
    let m = build_covariance(&CovarianceModel::Matern(steep), 64, 1.0).unwrap();
    let f = CholeskyFactor::new(m, CholeskyOptions::default()).unwrap();
    assert!(f.jitter().is_none());
}

#[test]
fn spinning_covariance_is_hermitian_toeplitz() {
    let p = ProcessParams::new(1.0, 1.7, 0.3, 0.9).unwrap();
    let m = build_covariance(&CovarianceModel::Matern(p), 20, 0.5).unwrap();
    assert!(!m.is_real());
    for i in 0..20 {
        for j in 0..20 {
            assert_eq!(m.entry(i, j), m.entry(j, i).conj());
            let lag = i as f64 - j as f64;
            assert!((m.entry(i, j) - autocovariance(&p, lag * 0.5).unwrap()).norm() < 1e-15);
        }
    }
}

#[test]
fn factor_matches_brute_force() {
    let p = ProcessParams::new(1.3, 1.2, 0.4, -0.6).unwrap();
    let n = 300;
    let m = build_covariance(&CovarianceModel::Matern(p), n, 1.0).unwrap();
    let dense: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| m.entry(i, j)).collect()).collect();
    let l_ref = common::dense_cholesky(&dense);
    let f = CholeskyFactor::new(m, CholeskyOptions::default()).unwrap();
    for i in 0..n {
        for j in 0..n {
            assert!((f.entry(i, j) - l_ref[i][j]).norm() < 1e-11, "({i},{j})");
        }
    }
}

#[test]
fn hand_factor_and_identity() {
    let m = CovarianceMatrix::toeplitz(1.0, &[c(1.0), c(0.5)]).unwrap();
    let f = CholeskyFactor::new(m, CholeskyOptions::default()).unwrap();
    assert_eq!(f.entry(0, 0), c(1.0));
    assert_eq!(f.entry(0, 1), c(0.0));
    assert!((f.entry(1, 0) - c(0.5)).norm() < 1e-16);
    assert!((f.entry(1, 1) - c(0.75f64.sqrt())).norm() < 1e-16);

    // Identity covariance: the samples are the noise itself.
    let n = 5;
    let mut e = vec![c(0.0); n * n];
    for i in 0..n {
        e[i * n + i] = c(1.0);
    }
    let m = CovarianceMatrix::from_entries(1.0, n, e).unwrap();
    let draws = cholesky_sample(m, 20_000, 3).unwrap();
    let sq: Vec<f64> = draws
        .iter()
        .flat_map(|s| s.values().iter().map(|z| z.norm_sqr()))
        .collect();
    let se = common::std_dev(&sq) / (sq.len() as f64).sqrt();
    assert!((common::mean(&sq) - 1.0).abs() < 4.0 * se);
}

#[test]
fn indefinite_matrix_is_rejected() {
    let m = CovarianceMatrix::toeplitz(1.0, &[c(1.0), c(2.0)]).unwrap();
    assert!(matches!(
        CholeskyFactor::new(m, CholeskyOptions::default()),
        Err(matern::Error::NotPositiveDefinite { pivot: 1, .. })
    ));
}

#[test]
fn cholesky_ensemble_covariance() {
    let p = ProcessParams::matern(1.0, 1.5, 0.2).unwrap();
    let n = 256;
    let count = 4000;
    let m = build_covariance(&CovarianceModel::Matern(p), n, 1.0).unwrap();
    let draws = cholesky_sample(m, count, 21).unwrap();
    let mut worst: f64 = 0.0;
    for lag in 0..8 {
        let exact = autocovariance(&p, lag as f64).unwrap();
        for i in lag..n {
            let prods: Vec<Complex64> = draws
                .iter()
                .map(|s| s.values()[i] * s.values()[i - lag].conj())
                .collect();
            let mean = prods.iter().sum::<Complex64>() / count as f64;
            let re: Vec<f64> = prods.iter().map(|z| z.re).collect();
            let se = common::std_dev(&re) / (count as f64).sqrt();
            worst = worst.max((mean.re - exact.re).abs() / se);
        }
    }
    assert!(worst < 4.5, "worst deviation {worst} standard errors");
}

#[test]
fn fbm_sampling_starts_at_zero() {
    let p = FbmParams::new(1.0, 0.8).unwrap();
    let draws = fbm_sample(&p, 50, 0.1, 3, 1, CholeskyOptions::default()).unwrap();
    for d in &draws {
        assert_eq!(d.len(), 50);
        assert_eq!(d.values()[0], c(0.0));
        assert!(d.values()[1].norm() > 0.0);
    }
    assert_eq!(
        fbm_sample(&p, 1, 0.1, 2, 1, CholeskyOptions::default()).unwrap()[0].len(),
        1
    );
}

#[test]
fn cutoff_examples() {
    let p = ProcessParams::matern(1.0, 1.0, 1.0).unwrap();
    assert!((fast_cutoff_time(&p, 0.01).unwrap() - 100f64.ln()).abs() < 1e-10);
    let p = ProcessParams::matern(1.0, 1.0, 2.0).unwrap();
    assert!((fast_cutoff_time(&p, 0.01).unwrap() - 100f64.ln() / 2.0).abs() < 1e-10);
    // 1 − e^{−x}(1 + x) = 0.99 by bisection.
    let (mut lo, mut hi) = (0.0f64, 50.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - (-mid).exp() * (1.0 + mid) < 0.99 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = ProcessParams::matern(1.0, 2.0, 1.0).unwrap();
    assert!((fast_cutoff_time(&p, 0.01).unwrap() - lo).abs() < 1e-8);
    assert!((lo - 6.638).abs() < 1e-3);
    assert!(fast_cutoff_time(&p, 0.0).is_err());
    assert!(fast_cutoff_time(&p, 1.0).is_err());
    // The spin does not change the cutoff.
    let spun = ProcessParams::new(1.0, 2.0, 1.0, 3.0).unwrap();
    assert_eq!(
        fast_cutoff_time(&spun, 0.01).unwrap(),
        fast_cutoff_time(&p, 0.01).unwrap()
    );
}

#[test]
fn auto_oversampling_examples() {
    let cfg = FastGenConfig::default();
    let g = FastGenerator::new(&ProcessParams::matern(1.0, 1.0, 0.1).unwrap(), 16, 1.0, &cfg).unwrap();
    assert_eq!(g.oversampling(), 1);
    let g = FastGenerator::new(&ProcessParams::matern(1.0, 1.0, 0.35).unwrap(), 16, 1.0, &cfg).unwrap();
    assert_eq!(g.oversampling(), 4);
    assert_eq!(g.burn_in(), (100f64.ln() / 0.35).ceil() as usize);
    assert_eq!(g.fine_len(), (16 + g.burn_in()) * 4);
    let fixed = FastGenConfig {
        oversampling: Oversampling::Fixed(0),
        ..cfg
    };
    assert!(FastGenerator::new(&ProcessParams::matern(1.0, 1.0, 0.35).unwrap(), 16, 1.0, &fixed).is_err());
}

#[test]
fn fft_convolution_matches_direct_sum() {
    let p = ProcessParams::new(1.0, 1.3, 0.4, 0.7).unwrap();
    let g = FastGenerator::new(&p, 12, 1.0, &FastGenConfig::default()).unwrap();
    let len = g.fine_len();
    let k = g.oversampling();
    let mut rng = realization_rng(9, 0);
    let noise = complex_noise(&mut rng, len);
    let full = g.full_output_from_noise(&noise).unwrap();
    let taps = g.filter();
    for (n, out) in full.iter().enumerate() {
        let direct: Complex64 = (0..len).map(|q| taps[q] * noise[(n * k + len - q) % len]).sum();
        assert!((out - direct).norm() < 1e-12 * direct.norm().max(1.0), "output {n}");
    }
    let kept = g.realize_from_noise(&noise).unwrap();
    assert_eq!(kept.len(), 12);
    assert_eq!(kept.values(), &full[g.burn_in()..]);
}

#[test]
fn output_depends_on_noise_only_through_filter_index() {
    // An impulse at noise index q moves output n by G_{(nk − q) mod L}: for
    // q ≤ nk that is the causal tap, and later noise reaches n only through
    // the periodic wrap, i.e. taps beyond the cutoff.
    let p = ProcessParams::matern(1.0, 2.0, 0.5).unwrap();
    let g = FastGenerator::new(&p, 32, 1.0, &FastGenConfig::default()).unwrap();
    let len = g.fine_len();
    let k = g.oversampling();
    let zero = vec![c(0.0); len];
    let base = g.full_output_from_noise(&zero).unwrap();
    let q = (g.burn_in() + 10) * k;
    let mut kick = zero.clone();
    kick[q] = c(1.0);
    let out = g.full_output_from_noise(&kick).unwrap();
    let tail_start = g.burn_in() * k;
    for n in 0..out.len() {
        let d = out[n] - base[n];
        let tap = g.filter()[(n * k + len - q) % len];
        assert!((d - tap).norm() < 1e-13, "output {n}");
        if n * k < q && n >= g.burn_in() {
            assert!(len - (q - n * k) >= tail_start);
        }
    }
}

#[test]
fn fast_mean_and_variance() {
    let p = ProcessParams::matern(1.0, 1.0, 0.1).unwrap();
    let n = 100_000;
    let z = fast_sample(
        &p,
        n,
        1.0,
        &FastGenConfig {
            seed: 4,
            ..Default::default()
        },
        1,
    )
    .unwrap()
    .remove(0);
    // Exact sampling variances of the mean and of mean|z|² for a stationary
    // complex Gaussian series with autocovariance e^{−λ|τ|}.
    let r: Vec<f64> = (0..n).map(|j| (-0.1 * j as f64).exp()).collect();
    let mut var_mean = r[0] / n as f64;
    let mut var_power = r[0] * r[0] / n as f64;
    for j in 1..n {
        let w = 2.0 * (1.0 - j as f64 / n as f64) / n as f64;
        var_mean += w * r[j];
        var_power += w * r[j] * r[j];
    }
    let mean = z.values().iter().sum::<Complex64>() / n as f64;
    let power = z.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
    // Each of Re and Im carries half of the mean's variance.
    assert!(mean.re.abs() < 5.0 * (var_mean / 2.0).sqrt());
    assert!(mean.im.abs() < 5.0 * (var_mean / 2.0).sqrt());
    // The ε = 0.01 cutoff removes about 1% of the variance.
    assert!((power - 1.0).abs() < 5.0 * var_power.sqrt() + 0.011, "power {power}");
}

#[test]
fn reproducible_and_count_independent() {
    let p = ProcessParams::new(1.0, 1.5, 0.2, 0.3).unwrap();
    let cfg = FastGenConfig {
        seed: 77,
        ..Default::default()
    };
    let a = fast_sample(&p, 500, 1.0, &cfg, 3).unwrap();
    let b = fast_sample(&p, 500, 1.0, &cfg, 3).unwrap();
    let one = fast_sample(&p, 500, 1.0, &cfg, 1).unwrap();
    for (x, y) in a.iter().zip(&b) {
        let bits = |s: &matern::ComplexSeries| {
            s.values()
                .iter()
                .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(x), bits(y));
    }
    assert_eq!(a[0], one[0]);
    assert_ne!(a[0], a[1]);
    let other = fast_sample(&p, 500, 1.0, &FastGenConfig { seed: 78, ..cfg }, 1).unwrap();
    assert_ne!(a[0], other[0]);

    let m = build_covariance(&CovarianceModel::Matern(p), 40, 1.0).unwrap();
    let c1 = cholesky_sample(m.clone(), 2, 5).unwrap();
    let c2 = cholesky_sample(m, 5, 5).unwrap();
    assert_eq!(c1[..], c2[..2]);
}

#[test]
fn fast_output_is_stationary() {
    let p = ProcessParams::matern(1.0, 1.0, 0.1).unwrap();
    let n = 64;
    let count = 4000;
    let draws = fast_sample(
        &p,
        n,
        1.0,
        &FastGenConfig {
            seed: 8,
            ..Default::default()
        },
        count,
    )
    .unwrap();
    for &lag in &[0usize, 3, 10] {
        let stat = |m: usize| {
            let v: Vec<f64> = draws
                .iter()
                .map(|s| (s.values()[m + lag] * s.values()[m].conj()).re)
                .collect();
            (common::mean(&v), common::std_dev(&v) / (count as f64).sqrt())
        };
        let (a, sa) = stat(0);
        let (b, sb) = stat(n - 1 - lag);
        assert!(
            (a - b).abs() < 4.0 * (sa * sa + sb * sb).sqrt(),
            "lag {lag}: {a} vs {b}"
        );
    }
}

#[test]
fn audit_examples() {
    let p = ProcessParams::matern(1.0, 1.0, 0.1).unwrap();
    let base = fast_audit(&p, 256, 1.0, &FastGenConfig::default()).unwrap();
    assert!(base.max_rel_error < 0.02, "{base:?}");
    let loose = fast_audit(
        &p,
        256,
        1.0,
        &FastGenConfig {
            epsilon: 0.5,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(loose.max_abs_error > base.max_abs_error);

    let q = ProcessParams::matern(1.0, 1.0, 0.3).unwrap();
    let k1 = fast_audit(
        &q,
        256,
        1.0,
        &FastGenConfig {
            oversampling: Oversampling::Fixed(1),
            ..Default::default()
        },
    )
    .unwrap();
    let k4 = fast_audit(
        &q,
        256,
        1.0,
        &FastGenConfig {
            oversampling: Oversampling::Fixed(4),
            ..Default::default()
        },
    )
    .unwrap();
    assert!(k4.max_abs_error < k1.max_abs_error, "{k1:?} {k4:?}");
}

#[test]
fn implied_covariance_matches_ensemble() {
    // R̂ describes what the generator actually produces.
    let p = ProcessParams::new(1.0, 1.2, 0.8, 0.5).unwrap();
    let cfg = FastGenConfig {
        epsilon: 0.3,
        seed: 2,
        ..Default::default()
    };
    let g = FastGenerator::new(&p, 8, 1.0, &cfg).unwrap();
    let count = 20_000;
    let draws = g.sample(count, 2);
    for lag in 0..4 {
        let v: Vec<Complex64> = draws
            .iter()
            .map(|s| s.values()[4 + lag] * s.values()[4].conj())
            .collect();
        let mean = v.iter().sum::<Complex64>() / count as f64;
        let se = (v.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / count as f64 / count as f64).sqrt();
        assert!((mean - g.implied_covariance(lag)).norm() < 4.0 * se, "lag {lag}");
    }
}

#[test]
fn cholesky_and_fast_spectra_agree() {
    let p = ProcessParams::matern(1.0, 1.5, 0.05).unwrap();
    let n = 512;
    let reps = 20;
    let tapers = slepian_tapers(n, 4.0, 7).unwrap();
    let spectra = |draws: Vec<matern::ComplexSeries>| -> Vec<Vec<f64>> {
        draws
            .iter()
            .map(|d| multitaper_with(d, &tapers, false).unwrap().values().to_vec())
            .collect()
    };
    let fast = spectra(
        fast_sample(
            &p,
            n,
            1.0,
            &FastGenConfig {
                seed: 1,
                ..Default::default()
            },
            reps,
        )
        .unwrap(),
    );
    let m = build_covariance(&CovarianceModel::Matern(p), n, 1.0).unwrap();
    let chol = spectra(cholesky_sample(m, reps, 1).unwrap());

    // Per pair, the ratio of two 7-taper estimates is roughly F(14, 14), whose
    // central 95% interval is about ±0.475 in log10.
    let mut inside = 0usize;
    for (f, c) in fast.iter().zip(&chol) {
        inside += f.iter().zip(c).filter(|(a, b)| (*a / *b).log10().abs() < 0.475).count();
    }
    let frac = inside as f64 / (reps * n) as f64;
    assert!(frac > 0.9, "fraction inside {frac}");

    // Ensemble averages stay within a fraction of that spread.
    let avg = |s: &[Vec<f64>]| {
        (0..n)
            .map(|j| s.iter().map(|v| v[j]).sum::<f64>() / reps as f64)
            .collect::<Vec<_>>()
    };
    let (fa, ca) = (avg(&fast), avg(&chol));
    let logs: Vec<f64> = fa.iter().zip(&ca).map(|(a, b)| (a / b).log10()).collect();
    assert!(common::mean(&logs).abs() < 0.1, "mean {}", common::mean(&logs));
    assert!(logs.iter().all(|x| x.abs() < 0.35));
}

#[test]
fn fast_runtime_scales_near_linearly() {
    let p = ProcessParams::matern(1.0, 1.5, 0.1).unwrap();
    let time = |n: usize| {
        let g = FastGenerator::new(&p, n, 1.0, &FastGenConfig::default()).unwrap();
        let t = std::time::Instant::now();
        let _ = g.sample(3, 0);
        t.elapsed().as_secs_f64()
    };
    time(1 << 12);
    let small = time(1 << 14);
    let large = time(1 << 17);
    // 8× the length; N log N predicts ≈ 9.7×. Allow generous timing noise.
    assert!(large / small < 40.0, "ratio {}", large / small);
}

#[test]
fn white_noise_has_unit_power() {
    let w = white_noise(2.0, 50_000, 1.0, 1, 3).unwrap().remove(0);
    let power = w.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / 50_000.0;
    assert!((power - 4.0).abs() < 0.1);
    let re_var = w.values().iter().map(|z| z.re * z.re).sum::<f64>() / 50_000.0;
    assert!((re_var - 2.0).abs() < 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn implied_covariance_is_bounded_by_variance(a in 0.6f64..4.0, l in 0.02f64..1.5, w in -1.0f64..1.0) {
        let p = ProcessParams::new(1.0, a, l, w).unwrap();
        let g = FastGenerator::new(&p, 16, 1.0, &FastGenConfig::default()).unwrap();
        let r0 = g.implied_covariance(0);
        prop_assert!(r0.im.abs() < 1e-12);
        prop_assert!(r0.re > 0.0);
        for lag in 1..16 {
            prop_assert!(g.implied_covariance(lag).norm() <= r0.re * (1.0 + 1e-12));
        }
    }

    #[test]
    fn same_seed_same_output(seed in any::<u64>(), a in 0.6f64..3.0) {
        let p = ProcessParams::matern(1.0, a, 0.2).unwrap();
        let cfg = FastGenConfig { seed, ..Default::default() };
        let x = fast_sample(&p, 64, 1.0, &cfg, 2).unwrap();
        let y = fast_sample(&p, 64, 1.0, &cfg, 2).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn factor_reproduces_matrix(a in 0.6f64..3.0, l in 0.05f64..2.0, w in -1.0f64..1.0, n in 2usize..40) {
        let p = ProcessParams::new(1.0, a, l, w).unwrap();
        let m = build_covariance(&CovarianceModel::Matern(p), n, 1.0).unwrap();
        let f = CholeskyFactor::new(m.clone(), CholeskyOptions { jitter_retry: true }).unwrap();
        for i in 0..n {
            for j in 0..=i {
                let s: Complex64 = (0..=j).map(|k| f.entry(i, k) * f.entry(j, k).conj()).sum();
                let tol = 1e-12 + f.jitter().unwrap_or(0.0);
                prop_assert!((s - m.entry(i, j)).norm() < tol);
            }
        }
    }
}
