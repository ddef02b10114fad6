mod common;

use gbe_core::arith::{MultiPoly, Rational, Var};
use gbe_core::error::MomentError;
use gbe_core::loops::resolvent_expansion;
use gbe_core::moments::{
    check_duality, check_structure, moment_polynomial, moment_polynomial_from,
    subleading_closed_form, unit_circle_zeros, MomentPoly, ResolventCoefficients,
};

#[test]
fn moments_through_twelve_from_closed_forms() {
    let ws = resolvent_expansion(6).unwrap();
    for p in 0..=6 {
        assert_eq!(
            moment_polynomial(p, &ws).unwrap(),
            common::moment(p),
            "m_{}",
            2 * p
        );
    }
}

#[test]
fn higher_moments_from_series() {
    let table = ResolventCoefficients::from_series(10, 10);
    for p in 0..=10 {
        assert_eq!(
            moment_polynomial_from(p, &table).unwrap(),
            common::moment(p),
            "m_{}",
            2 * p
        );
    }
}

#[test]
fn series_and_closed_form_tables_agree() {
    let ws = resolvent_expansion(6).unwrap();
    let a = ResolventCoefficients::from_resolvent(&ws, 8).unwrap();
    let b = ResolventCoefficients::from_series(6, 8);
    for l in 0..=6 {
        for p in 0..=8 {
            assert_eq!(a.get(l, p), b.get(l, p), "l={l} p={p}");
        }
    }
}

#[test]
fn insufficient_order_is_reported() {
    let ws = resolvent_expansion(2).unwrap();
    assert!(matches!(
        moment_polynomial(3, &ws),
        Err(MomentError::InsufficientOrder {
            moment: 6,
            needed: 3,
            available: 2
        })
    ));
}

#[test]
fn duality_and_structure() {
    for p in 0..=10 {
        let m = common::moment(p);
        assert!(check_duality(&m), "m_{}", 2 * p);
        let r = check_structure(&m);
        assert!(r.passed(), "m_{}: {:?}", 2 * p, r.failures());
    }
}

#[test]
fn perturbed_moment_fails_duality() {
    let m = common::moment(2);
    let mut c = m.coeffs().clone();
    *c.get_mut(&(1, 0)).unwrap() += &Rational::one();
    let bad = MomentPoly::new(2, c);
    assert!(!check_duality(&bad));
    assert!(!check_structure(&bad).passed());
}

#[test]
fn subleading_closed_forms_match_table() {
    let table = ResolventCoefficients::from_series(10, 10);
    for depth in 1..=6 {
        for l in depth..=10 {
            assert_eq!(
                &subleading_closed_form(l, depth).unwrap(),
                table.get(depth, l),
                "depth {depth}, l = {l}"
            );
        }
    }
}

#[test]
fn depth_one_at_l3_is_minus_22h() {
    assert_eq!(
        subleading_closed_form(3, 1).unwrap(),
        MultiPoly::var(Var::H).scale(&Rational::from_int(-22))
    );
}

#[test]
fn zeros_on_unit_circle() {
    for p in 2..=10 {
        let r = unit_circle_zeros(&common::moment(p), 1e-8);
        assert!(r.within_tol, "m_{}: {}", 2 * p, r.max_modulus_deviation);
    }
    // m_8, N^1 numerator 105κ⁴ − 260κ³ + 331κ² − 260κ + 105
    let r = unit_circle_zeros(&common::moment(4), 1e-9);
    let c = r.per_coefficient.iter().find(|c| c.n_power == 1).unwrap();
    assert_eq!(c.roots.len(), 4);
    assert!(c.max_modulus_deviation < 1e-9);
}

#[test]
fn latex_line_for_m6() {
    assert_eq!(
        common::moment(3).to_latex(),
        "m_{6} = 5 N^{4}+22 N^{3}\\left(-1+\\kappa^{-1}\\right)+N^{2}\\left(32-54\\kappa^{-1}+32\\kappa^{-2}\\right)+N\\left(-15+32\\kappa^{-1}-32\\kappa^{-2}+15\\kappa^{-3}\\right)"
    );
}
