mod common;

use gbe_core::arith::poly::g;
use gbe_core::arith::rational::factorial;
use gbe_core::arith::{MultiPoly, Rational, Var};
use gbe_core::classical::closed::applicable_forms;
use gbe_core::classical::ode::specialize_kappa;
use gbe_core::classical::series::double_factorial_odd;
use gbe_core::classical::*;
use gbe_core::loops::resolvent_expansion;
use gbe_core::moments::{moment_polynomial_from, ResolventCoefficients};

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

#[test]
fn closed_forms_match_recurrences() {
    for e in EnsembleTag::ALL {
        for n in 1..=8 {
            let rec = recurrence_moments(e, 12, &r(n));
            for f in applicable_forms(e, n) {
                for p in 0..=12 {
                    assert_eq!(
                        closed_form_moment(e, f, p, n).unwrap(),
                        rec[p],
                        "{e:?} {f:?} N={n} p={p}"
                    );
                }
            }
        }
    }
}

#[test]
fn general_beta_moments_specialize_to_classical() {
    let table = ResolventCoefficients::from_series(12, 12);
    for p in 0..=12 {
        let m = moment_polynomial_from(p, &table).unwrap();
        for e in EnsembleTag::ALL {
            for n in 1..=8 {
                let rec = &recurrence_moments(e, p, &r(n))[p];
                assert_eq!(&m.eval(&r(n), &e.kappa()), rec, "{e:?} N={n} p={p}");
            }
        }
    }
}

#[test]
fn generating_functions_reproduce_gue_moments() {
    for n in 1..=6u32 {
        let rec = recurrence_moments(EnsembleTag::Gue, 20, &r(n as i64));
        let hz = harer_zagier(20, n);
        let u = gue_u_series(20, &r(n as i64));
        for p in 0..=20 {
            assert_eq!(&hz[p] * &double_factorial_odd(p), rec[p], "HZ N={n} p={p}");
            assert_eq!(
                &u[p] * &Rational::from(factorial(2 * p as u32)),
                rec[p],
                "1F1 N={n} p={p}"
            );
        }
    }
}

#[test]
fn exponential_generating_functions_satisfy_their_odes() {
    for e in EnsembleTag::ALL {
        for n in 1..=6 {
            assert!(u_ode_check(e, 10, &r(n)), "{e:?} N={n}");
        }
    }
    // GOE boundary data: N(5N³+22N²+52N+41)/6! at t⁶
    let m = recurrence_moments(EnsembleTag::Goe, 3, &r(3));
    assert_eq!(m[3], r(3 * (5 * 27 + 22 * 9 + 52 * 3 + 41)));
}

#[test]
fn resolvent_odes_hold_to_the_stated_order() {
    let ws = resolvent_expansion(6).unwrap();
    let gue = ode_residual(EnsembleTag::Gue, &ws);
    assert_eq!(gue.first_nonzero, Some(8));
    for e in [EnsembleTag::Goe, EnsembleTag::Gse] {
        let rep = ode_residual(e, &ws);
        assert_eq!(rep.first_nonzero, Some(7), "{e:?}");
    }
    // one order fewer moves the GUE residual down by two
    assert_eq!(
        ode_residual(EnsembleTag::Gue, &ws[..5]).first_nonzero,
        Some(6)
    );
}

#[test]
fn specialized_resolvent_is_rational_in_x_and_g() {
    let w = common::resolvent(3);
    let s = specialize_kappa(&w, 3, &r(2));
    assert!(s.terms().values().all(|p| !p.involves(Var::H)));
}

#[test]
fn eta_functions_are_even_resolvent_orders_at_kappa_one() {
    let coeffs = eta_coefficients(3);
    for j in 1..=3usize {
        let eta = eta_function(&coeffs[j - 1]);
        let w = common::resolvent(2 * j);
        let at_one = w.map_numerators(&|p: &MultiPoly| p.eval_var(Var::H, &Rational::zero()));
        assert_eq!(eta, at_one.mul_poly(&g().pow(2 * j as u32)), "j = {j}");
        let unit = eta.map_numerators(&|p: &MultiPoly| p.eval_var(Var::G, &Rational::one()));
        let w_unit = at_one.map_numerators(&|p: &MultiPoly| p.eval_var(Var::G, &Rational::one()));
        assert_eq!(unit, w_unit);
    }
}

#[test]
fn large_n_expansions_match_symbolic_moments() {
    for e in EnsembleTag::ALL {
        let sym = recurrence_moments_symbolic(e, 12);
        for p in 0..=12usize {
            let ex = large_n_moment_expansion(e, p, 6).unwrap();
            let cp =
                gbe_core::arith::rational::binomial_int(2 * p as i64, p as i64) / r(p as i64 + 1);
            let by_n = sym[p].coeffs_in(Var::N);
            for (j, c) in ex.iter().enumerate() {
                let deg = p as i64 + 1 - j as i64;
                let mut want = if deg >= 0 && (deg as usize) < by_n.len() {
                    by_n[deg as usize].constant_term()
                } else {
                    Rational::zero()
                };
                if e == EnsembleTag::Gue {
                    want = want / cp.clone();
                }
                assert_eq!(*c, want, "{e:?} p={p} N^-{j}");
            }
        }
    }
    assert_eq!(
        large_n_moment_expansion(EnsembleTag::Gue, 4, 2).unwrap()[2],
        r(5)
    );
    assert_eq!(
        large_n_moment_expansion(EnsembleTag::Goe, 1, 1).unwrap()[1],
        r(1)
    );
    assert_eq!(
        large_n_moment_expansion(EnsembleTag::Gse, 1, 1).unwrap()[1],
        Rational::new(-1, 2)
    );
    assert!(large_n_moment_expansion(EnsembleTag::Goe, 3, 7).is_err());
}

#[test]
fn gse_goe_duality_holds_and_detects_perturbation() {
    for p in 0..=10 {
        assert!(gse_goe_duality(p), "p = {p}");
    }
    let gse = recurrence_moments_symbolic(EnsembleTag::Gse, 4);
    let goe = recurrence_moments_symbolic(EnsembleTag::Goe, 4);
    let bent = &gse[4] + &MultiPoly::var(Var::N).scale(&Rational::new(1, 16));
    assert!(!duality_holds(&bent, &goe[4], 4));
}
