mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use gbe_core::arith::Rational;
use gbe_core::density::{
    density_from_resolvent, hadamard_finite_part, hadamard_finite_part_with, linear_statistic_mean,
    polynomial_mean, statistic_order_value, stieltjes_transform, FnHandle, HalfGPoly,
    LinearStatistic, PolyFn, QuadConfig, SmoothFn, SmoothedDensity,
};
use gbe_core::error::DensityError;
use gbe_core::loops::resolvent_expansion;
use gbe_core::spectral::SpectralExpr;
use proptest::prelude::*;

fn computed() -> Vec<SmoothedDensity> {
    resolvent_expansion(6)
        .unwrap()
        .iter()
        .enumerate()
        .map(|(l, w)| density_from_resolvent(w, l).unwrap())
        .collect()
}

#[test]
fn densities_match_published_forms() {
    let ds = computed();
    for (l, d) in ds.iter().enumerate() {
        assert_eq!(*d, common::density(l), "rho_{l}");
    }
    // also from the published resolvent, independent of the solver
    for l in 0..=6 {
        let d = density_from_resolvent(&common::resolvent(l), l).unwrap();
        assert_eq!(d, common::density(l), "rho_{l} from the printed W");
    }
    let top = ds[6].delta()[&7].terms()[&(6, -3)].clone();
    assert_eq!(top, Rational::new(11865, 10321920));
}

#[test]
fn printed_rho3_sign_breaks_the_moment_identity() {
    let printed = common::density_as_printed(3);
    assert_ne!(printed, computed()[3]);
    // the printed ε⁽³⁾ coefficient leaves a nonzero fourth moment
    assert!(!polynomial_mean(&printed, 4).is_zero());
    assert!(polynomial_mean(&common::density(3), 4).is_zero());
}

#[test]
fn low_moments_vanish() {
    for (l, d) in computed().iter().enumerate().skip(1) {
        for sigma in 0..l as u32 {
            assert!(
                polynomial_mean(d, 2 * sigma).is_zero(),
                "l = {l}, sigma = {sigma}"
            );
        }
        assert!(!polynomial_mean(d, 2 * l as u32).is_zero());
    }
}

#[test]
fn semicircle_mass_and_first_correction() {
    let ds = computed();
    let g = HalfGPoly::term(Rational::one(), 0, 2);
    assert_eq!(polynomial_mean(&ds[0], 0), g);
    assert_eq!(
        polynomial_mean(&ds[1], 2),
        HalfGPoly::term(Rational::from_int(-1), 1, 2)
    );
}

#[test]
fn stieltjes_transform_inverts_the_dictionary() {
    let ws = resolvent_expansion(6).unwrap();
    for (l, w) in ws.iter().enumerate() {
        let d = density_from_resolvent(w, l).unwrap();
        let back = stieltjes_transform(&d).unwrap();
        // the polynomial x/2 of W_1^0 carries no density
        let want = if l == 0 {
            w.sub(&"x/2".parse::<SpectralExpr>().unwrap())
        } else {
            w.clone()
        };
        assert_eq!(back, want, "l = {l}");
    }
}

#[test]
fn json_round_trip() {
    for d in computed() {
        assert_eq!(SmoothedDensity::from_json(&d.to_json()).unwrap(), d);
    }
}

/// `c_l = g^p [N^{p+1−l}] m_{2p}(N, κ)` for `a = x^{2p}`.
#[test]
fn polynomial_statistics_reproduce_moment_coefficients() {
    let ds = computed();
    let g = Rational::new(1, 4);
    for kappa in [
        Rational::one(),
        Rational::new(1, 2),
        Rational::from_int(2),
        Rational::new(5, 2),
    ] {
        for p in 0..=6usize {
            let m = common::moment(p).specialize_kappa(&kappa);
            let s = linear_statistic_mean(
                &LinearStatistic::monomial(2 * p),
                &ds[..=p],
                &g,
                &kappa,
                &QuadConfig::default(),
            )
            .unwrap();
            let exact = s.exact.as_ref().expect("rational parameters");
            for l in 0..=p {
                let want = &g.pow(p as i32) * &m[p + 1 - l];
                assert_eq!(exact[l], want, "p = {p}, l = {l}, kappa = {kappa}");
                assert!(
                    (s.per_order[l] - want.to_f64()).abs() < 1e-12 * (1.0 + want.to_f64().abs())
                );
            }
        }
    }
}

#[test]
fn quadrature_path_matches_exact_path() {
    let ds = computed();
    let cfg = QuadConfig::default();
    let (g, kappa) = (0.25, 0.5f64);
    let h = kappa.sqrt() - 1.0 / kappa.sqrt();
    for (l, d) in ds.iter().enumerate() {
        for stat in [
            LinearStatistic::monomial(2 * l + 2),
            LinearStatistic::chebyshev(2 * l + 1),
            LinearStatistic::chebyshev(2 * l + 4),
        ] {
            let LinearStatistic::Polynomial(c) = &stat else {
                unreachable!()
            };
            let exact = gbe_core::density::polynomial_statistic_exact(c, d).eval_f64(g, h);
            let quad = statistic_order_value(stat.as_smooth().as_ref(), d, g, h, &cfg).unwrap();
            assert!(
                (quad - exact).abs() <= 1e-8 * (1.0 + exact.abs()),
                "l = {l}: {quad} vs {exact}"
            );
        }
    }
}

fn cos_handle() -> Arc<dyn SmoothFn> {
    Arc::new(FnHandle::new(40, |x: f64, k| {
        (0..=k)
            .map(|j| match j % 4 {
                0 => x.cos(),
                1 => -x.sin(),
                2 => -x.cos(),
                _ => x.sin(),
            })
            .collect()
    }))
}

#[test]
fn smooth_statistic_matches_its_taylor_series() {
    let ds = computed();
    let (g, h) = (1.0, 0.7);
    let cfg = QuadConfig::default();
    for (l, d) in ds.iter().enumerate() {
        let quad = statistic_order_value(cos_handle().as_ref(), d, g, h, &cfg).unwrap();
        // cos x = Σ (−1)^k x^{2k}/(2k)!, integrated exactly term by term
        let mut series = 0.0;
        let mut fact = 1.0;
        for k in 0..30u32 {
            if k > 0 {
                fact *= ((2 * k - 1) * 2 * k) as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            series += sign * polynomial_mean(d, 2 * k).eval_f64(g, h) / fact;
        }
        assert!(
            (quad - series).abs() <= 1e-8 * (1.0 + series.abs()),
            "l = {l}: {quad} vs {series}"
        );
    }
}

#[test]
fn constant_statistic_has_no_corrections() {
    let one: Arc<dyn SmoothFn> = Arc::new(FnHandle::new(12, |_x: f64, k| {
        let mut v = vec![0.0; k + 1];
        v[0] = 1.0;
        v
    }));
    let ds = computed();
    let s = linear_statistic_mean(
        &LinearStatistic::Smooth(one),
        &ds,
        &Rational::new(1, 4),
        &Rational::new(5, 2),
        &QuadConfig::default(),
    )
    .unwrap();
    assert!((s.per_order[0] - 1.0).abs() < 1e-12);
    for c in &s.per_order[1..] {
        assert!(c.abs() < 1e-9, "{c}");
    }
    assert!((s.at(10.0) - 10.0).abs() < 1e-8);
}

#[test]
fn insufficient_smoothness_is_reported() {
    let rough: Arc<dyn SmoothFn> = Arc::new(FnHandle::new(2, |x: f64, k| {
        (0..=k)
            .map(|j| {
                if j == 0 {
                    x
                } else if j == 1 {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    }));
    let d = &computed()[3];
    let err = statistic_order_value(rough.as_ref(), d, 0.25, 0.0, &QuadConfig::default());
    assert_eq!(
        err,
        Err(DensityError::InsufficientSmoothness {
            needed: 3,
            available: 2
        })
    );
}

#[test]
fn hadamard_reference_values() {
    let cfg = QuadConfig::default();
    let one = PolyFn(vec![1.0]);
    assert!(hadamard_finite_part(&one, 1, &cfg).unwrap().abs() < 1e-12);
    assert!((hadamard_finite_part(&one, 0, &cfg).unwrap() - PI).abs() < 1e-10);
    let y = PolyFn(vec![0.0, 1.0]);
    assert!((hadamard_finite_part(&y, 1, &cfg).unwrap() + PI).abs() < 1e-9);
    // y² at n = 2: B(5/2, −3/2) = Γ(5/2)Γ(−3/2)/Γ(1) = π
    let y2 = PolyFn(vec![0.0, 0.0, 1.0]);
    assert!((hadamard_finite_part(&y2, 2, &cfg).unwrap() - PI).abs() < 1e-9);
}

fn exp_handle() -> FnHandle<impl Fn(f64, usize) -> Vec<f64> + Send + Sync> {
    FnHandle::new(30, |x: f64, k| vec![x.exp(); k + 1])
}

#[test]
fn subtraction_order_does_not_change_the_value() {
    let cfg = QuadConfig::default();
    for n in 0..=4 {
        let base = hadamard_finite_part(&exp_handle(), n, &cfg).unwrap();
        for extra in 1..=2 {
            let v = hadamard_finite_part_with(&exp_handle(), n, n + extra, &cfg).unwrap();
            assert!((v - base).abs() < 1e-8, "n = {n}: {v} vs {base}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_polynomials_agree_between_paths(
        coeffs in prop::collection::vec(-5i64..=5, 1..9),
        l in 0usize..=4,
    ) {
        let ws = resolvent_expansion(4).unwrap();
        let d = density_from_resolvent(&ws[l], l).unwrap();
        let c: Vec<Rational> = coeffs.iter().map(|&v| Rational::from_int(v)).collect();
        let (g, h) = (0.5, -0.3);
        let exact = gbe_core::density::polynomial_statistic_exact(&c, &d).eval_f64(g, h);
        let a = LinearStatistic::Polynomial(c);
        let quad = statistic_order_value(a.as_smooth().as_ref(), &d, g, h, &QuadConfig::default()).unwrap();
        prop_assert!((quad - exact).abs() <= 1e-8 * (1.0 + exact.abs()), "{} vs {}", quad, exact);
    }

    #[test]
    fn flip_is_an_involutive_homomorphism(
        a in prop::collection::vec((0u16..4, -6i32..6, -9i64..9), 0..5),
        b in prop::collection::vec((0u16..4, -6i32..6, -9i64..9), 0..5),
    ) {
        let mk = |v: &[(u16, i32, i64)]| v.iter().fold(HalfGPoly::zero(), |acc, &(h, s, c)| {
            acc.add(&HalfGPoly::term(Rational::from_int(c), h, s))
        });
        let (p, q) = (mk(&a), mk(&b));
        prop_assert_eq!(p.flip_s().flip_s(), p.clone());
        prop_assert_eq!(p.mul(&q).flip_s(), p.flip_s().mul(&q.flip_s()));
    }
}
