use gbe_core::arith::Rational;
use gbe_core::mc::{
    estimate_with, exact_moments, sample, trace_moments, Convention, McConfig, TridiagonalSample,
};
use gbe_core::moments::{moment_polynomial_from, ResolventCoefficients};
use proptest::prelude::*;

fn dense(s: &TridiagonalSample) -> Vec<Vec<f64>> {
    let n = s.n;
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = s.scale * s.diagonal[i];
        if i + 1 < n {
            m[i][i + 1] = s.scale * s.off_diagonal[i];
            m[i + 1][i] = s.scale * s.off_diagonal[i];
        }
    }
    m
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

#[test]
fn trace_matches_dense_powers() {
    for seed in 0..5 {
        let s = sample(5, 1.7, seed, 3, Convention::Unscaled).unwrap();
        let m = dense(&s);
        let sq = matmul(&m, &m);
        let mut pow = sq.clone();
        let t = trace_moments(&s, 6);
        assert_eq!(t[0], 5.0);
        for (p, &v) in t.iter().enumerate().skip(1) {
            let want: f64 = (0..5).map(|i| pow[i][i]).sum();
            assert!(
                (v - want).abs() <= 1e-12 * want.abs(),
                "p = {p}: {v} vs {want}"
            );
            pow = matmul(&pow, &sq);
        }
    }
}

#[test]
fn samples_are_deterministic() {
    let a = sample(6, 2.5, 42, 0, Convention::default()).unwrap();
    let b = sample(6, 2.5, 42, 0, Convention::default()).unwrap();
    assert_eq!(a, b);
    let c = sample(6, 2.5, 42, 1, Convention::default()).unwrap();
    assert_ne!(a, c);
    assert!(a.off_diagonal.iter().all(|&v| v > 0.0));
}

#[test]
fn single_eigenvalue_variance() {
    // N = 1: density ∝ e^{−βλ²/4}, variance 2/β
    for beta in [0.5, 2.0, 5.0] {
        let mut cfg = McConfig::new(1, beta, 1, 100_000, 9);
        cfg.convention = Convention::Unscaled;
        let est = estimate_with(&cfg).unwrap();
        assert_eq!(est[1].exact, 2.0 / beta);
        assert!(est[1].z.abs() <= 4.0, "{:?}", est[1]);
    }
}

#[test]
fn small_gue_second_moment() {
    let mut cfg = McConfig::new(2, 2.0, 1, 100_000, 1);
    cfg.convention = Convention::Unscaled;
    let est = estimate_with(&cfg).unwrap();
    assert_eq!(est[1].exact, 4.0);
    assert!(est[1].z.abs() <= 4.0, "{:?}", est[1]);
}

#[test]
fn reference_cases() {
    let cases = [(8, 2.0, 1, 64.0), (4, 1.0, 2, 228.0)];
    for (n, beta, p, want) in cases {
        let mut cfg = McConfig::new(n, beta, p, 100_000, 7);
        cfg.convention = Convention::Unscaled;
        let est = &estimate_with(&cfg).unwrap()[p];
        assert_eq!(est.exact, want);
        assert!(!est.flagged(), "{est:?}");
    }
    // general β against the moment polynomial at κ⁻¹ = 2/5
    let table = ResolventCoefficients::from_series(2, 2);
    let m4 = moment_polynomial_from(2, &table).unwrap();
    let want = m4.eval(&Rational::from_int(6), &Rational::new(5, 2));
    let mut cfg = McConfig::new(6, 5.0, 2, 100_000, 7);
    cfg.convention = Convention::Unscaled;
    let est = &estimate_with(&cfg).unwrap()[2];
    assert_eq!(est.exact, want.to_f64());
    assert!(!est.flagged(), "{est:?}");
}

#[test]
fn conventions_differ_by_g_over_n() {
    let (n, g) = (5, 0.25);
    let mut cfg = McConfig::new(n, 3.0, 3, 2000, 11);
    cfg.convention = Convention::Unscaled;
    let raw = estimate_with(&cfg).unwrap();
    cfg.convention = Convention::Starred { g };
    let star = estimate_with(&cfg).unwrap();
    let exact = exact_moments(n, 3.0, 3, Convention::Unscaled).unwrap();
    for p in 0..=3 {
        let f = (g / n as f64).powi(p as i32);
        assert!((star[p].mean - f * raw[p].mean).abs() <= 1e-12 * star[p].mean.abs());
        assert!((star[p].exact - f * exact[p].to_f64()).abs() <= 1e-15 * star[p].exact.abs());
    }
}

#[test]
fn thread_count_does_not_change_estimates() {
    let mut cfg = McConfig::new(6, 1.0, 3, 20_000, 5);
    let one = estimate_with(&cfg).unwrap();
    cfg.threads = 3;
    assert_eq!(estimate_with(&cfg).unwrap(), one);
}

#[test]
fn z_scores_are_centred_over_streams() {
    let mut zs = Vec::new();
    for stream in 0..20 {
        let mut cfg = McConfig::new(4, 1.5, 2, 4000, 2024);
        cfg.stream = stream;
        let est = estimate_with(&cfg).unwrap();
        assert!(est.iter().all(|e| !e.flagged()), "{est:?}");
        zs.push(est[2].z);
    }
    let mean = zs.iter().sum::<f64>() / zs.len() as f64;
    assert!(mean.abs() < 1.0, "{zs:?}");
}

#[test]
fn too_few_samples_is_rejected() {
    assert!(estimate_with(&McConfig::new(4, 1.0, 2, 99, 0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn zeroth_moment_is_n(n in 1usize..12, beta in 0.2f64..8.0, seed: u64) {
        let s = sample(n, beta, seed, 0, Convention::default()).unwrap();
        let t = trace_moments(&s, 4);
        prop_assert_eq!(t[0], n as f64);
        prop_assert!(t.iter().all(|v| *v >= 0.0));
    }
}
