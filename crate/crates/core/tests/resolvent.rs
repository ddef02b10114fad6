mod common;

use gbe_core::arith::poly::{g, x};
use gbe_core::arith::{MultiPoly, Rational, Var};
use gbe_core::loops::{
    canonical_check, loop_residual, resolvent_expansion, resolvent_from_store, solve_order,
    HierarchyStore, LoopRing, ZHierarchy,
};
use gbe_core::spectral::SpectralExpr;
use proptest::prelude::*;

#[test]
fn first_seven_coefficients_match_reference() {
    let ws = resolvent_expansion(6).unwrap();
    for (l, w) in ws.iter().enumerate() {
        assert_eq!(w, &common::resolvent(l), "W_1^{l}");
    }
}

#[test]
fn base_solves_its_quadratic() {
    let w = resolvent_expansion(0).unwrap().remove(0);
    let q = w
        .mul(&w)
        .sub(&w.mul_poly(&x()))
        .add(&SpectralExpr::poly(g()));
    assert!(q.is_zero());
    let s = w.series_at_infinity(3);
    assert_eq!(s.coeff(1), g());
}

#[test]
fn leading_order_at_infinity() {
    let ws = resolvent_expansion(6).unwrap();
    for (l, w) in ws.iter().enumerate() {
        let s = w.series_at_infinity(2 * l as i32 + 1);
        for e in -1..(2 * l as i32 + 1) {
            assert!(s.coeff(e).is_zero(), "W_1^{l} has x^-{e}");
        }
        assert!(!s.coeff(2 * l as i32 + 1).is_zero());
    }
}

#[test]
fn two_point_base_case() {
    let store = {
        let mut s = HierarchyStore::new();
        s.ensure(2, 0).unwrap();
        s
    };
    // W_2^0 = (x1 x2 − 4g − y1 y2) / (2 y1 y2 (x1 − x2)²)
    let w = store.get(2, 0).unwrap();
    for &(a, b) in &[(3.0f64, 2.5f64), (5.0, 1.5), (2.2, 7.0)] {
        let gv: f64 = 0.25;
        let (y1, y2) = ((a * a - 4.0 * gv).sqrt(), (b * b - 4.0 * gv).sqrt());
        let want = (a * b - 4.0 * gv - y1 * y2) / (2.0 * y1 * y2 * (a - b) * (a - b));
        let got = w.eval_f64(&[a, b], gv, 0.3);
        assert!(
            (got - want).abs() < 1e-12 * want.abs().max(1.0),
            "{a},{b}: {got} vs {want}"
        );
    }
}

#[test]
fn every_solved_slot_has_zero_residual() {
    let mut store = HierarchyStore::new();
    store.ensure(1, 5).unwrap();
    for &(n, l) in store.schedule().iter().skip(1) {
        assert!(loop_residual(n, l, &store).unwrap().is_zero(), "W_{n}^{l}");
    }
}

#[test]
fn corrupted_dependency_breaks_residual() {
    let mut store = HierarchyStore::new();
    store.ensure(1, 2).unwrap();
    let bumped = store.get(2, 0).unwrap().scale_int(2);
    store.insert(2, 0, bumped);
    assert!(!loop_residual(1, 2, &store).unwrap().is_zero());
    let fresh = solve_order(1, 2, &store).unwrap();
    assert_ne!(Some(&fresh), store.get(1, 2));
}

#[test]
fn schedule_is_demand_driven() {
    let mut store = HierarchyStore::new();
    store.ensure(1, 4).unwrap();
    let sched = store.schedule();
    for (i, &(n, l)) in sched.iter().enumerate() {
        for d in gbe_core::loops::dependencies(n, l) {
            let j = sched
                .iter()
                .position(|&s| s == d)
                .expect("dependency solved");
            assert!(j < i);
        }
    }
    // W_4 is never needed for W_1^4
    assert!(sched.iter().all(|&(n, _)| n <= 3));
    let dag = store.dag_json();
    assert_eq!(dag["schema"], "gbe/1");
    assert_eq!(dag["schedule"].as_array().unwrap().len(), sched.len());
}

#[test]
fn uniformized_backend_agrees_through_fifth_order() {
    let a = resolvent_expansion(5).unwrap();
    let b = resolvent_from_store(&mut ZHierarchy::new(), 5).unwrap();
    assert_eq!(a, b);
}

#[test]
fn multipoint_correlators_agree_numerically() {
    let mut a = HierarchyStore::new();
    let mut b = ZHierarchy::new();
    a.ensure(1, 4).unwrap();
    b.ensure(1, 4).unwrap();
    let xs = [2.7, 3.1, 4.4];
    for &(n, l) in a.schedule() {
        let za = a.get(n, l).unwrap().eval_f64(&xs[..n], 1.0, 0.7);
        let zb = b.get(n, l).unwrap().eval_f64(&xs[..n], 0.7);
        assert!(
            (za - zb).abs() <= 1e-10 * za.abs().max(1e-3),
            "W_{n}^{l}: {za} vs {zb}"
        );
    }
}

#[test]
fn duality_at_resolvent_level() {
    // W(x, N, κ) = −W(x, −κN, 1/κ)/κ holds order by order in 1/N exactly
    // when W_1^l(x; −h) = (−1)^l W_1^l(x; h).
    let ws = resolvent_expansion(6).unwrap();
    for (l, w) in ws.iter().enumerate() {
        let flipped = w.map_numerators(&|p: &MultiPoly| {
            p.substitute(
                Var::H,
                &MultiPoly::var(Var::H).scale(&Rational::from_int(-1)),
            )
        });
        let want = if l % 2 == 0 { w.clone() } else { w.neg() };
        assert_eq!(flipped, want, "W_1^{l}");
    }
}

#[test]
fn block_structure_of_computed_coefficients() {
    let ws = resolvent_expansion(6).unwrap();
    for (l, w) in ws.iter().enumerate() {
        let r = canonical_check(w, l);
        assert!(r.passed(), "l = {l}: {:?}", r.failures());
    }
    // W_1^4 keeps an h-free numerator of degree 2 over y^11
    let r = canonical_check(&ws[4], 4);
    assert!(r.checks.iter().any(|c| c.0 == "h^0 y^-11 degree" && c.1));
    // W_1^1 is one h-block with degrees 0 and 1
    let r1 = canonical_check(&ws[1], 1);
    let ids: Vec<&str> = r1.checks.iter().map(|c| c.0.as_str()).collect();
    assert!(ids.contains(&"h^1 y^-1 degree") && ids.contains(&"h^1 y^-2 degree"));
}

#[test]
fn resolvent_json_round_trip() {
    for w in resolvent_expansion(6).unwrap() {
        assert_eq!(SpectralExpr::from_json(&w.to_json()).unwrap(), w);
        assert!(w.to_latex().contains("\\frac"));
    }
}

fn small_expr() -> impl Strategy<Value = SpectralExpr> {
    prop::collection::vec((0u16..4, 0u16..3, 0u16..3, -6i64..6, -2i32..6), 0..6).prop_map(|v| {
        v.into_iter()
            .fold(SpectralExpr::zero(), |acc, (a, b, c, k, s)| {
                let p = SpectralExpr::from_rows(&[(a, b, c, Rational::from_int(k))]);
                acc.add(&SpectralExpr::term(p, s))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_of_random_elements(e in small_expr()) {
        prop_assert_eq!(SpectralExpr::from_json(&e.to_json()).unwrap(), e);
    }

    #[test]
    fn reduce_is_idempotent(e in small_expr()) {
        prop_assert_eq!(e.reduce(), e.clone());
        prop_assert_eq!(e.reduce().reduce(), e.reduce());
    }

    #[test]
    fn product_rule(a in small_expr(), b in small_expr()) {
        let lhs = a.mul(&b).derivative();
        let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_is_a_ring_homomorphism(a in small_expr(), b in small_expr()) {
        let order = 6;
        let sa = a.series_at_infinity(order);
        let sb = b.series_at_infinity(order);
        let sum = a.add(&b).series_at_infinity(order);
        for k in -8..=order {
            prop_assert_eq!(sum.coeff(k), &sa.coeff(k) + &sb.coeff(k));
        }
    }
}
