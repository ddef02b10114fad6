//! Generating functions of the classical moments and the linear ODEs they
//! satisfy, checked coefficient by coefficient.

use crate::arith::rational::{binomial_int, factorial};
use crate::arith::Rational;

use super::recurrence::recurrence_moments;
use super::EnsembleTag;

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Taylor coefficients in `s²` of `φ(s, N) = [((1+s²)/(1−s²))^N − 1] / (2s²)`.
/// The `s^{2p}` coefficient times `(2p−1)!!` is the GUE moment `m_{2p}`.
pub fn harer_zagier(p_max: usize, n: u32) -> Vec<Rational> {
    let n = n as i64;
    // (1+u)^N (1−u)^{−N}, coefficients of u^1 … u^{p_max+1}
    (1..=p_max as i64 + 1)
        .map(|q| {
            let c: Rational = (0..=q)
                .map(|a| binomial_int(n, a) * binomial_int(n + q - a - 1, q - a))
                .sum();
            c * Rational::new(1, 2)
        })
        .collect()
}

/// `(2p − 1)!!`, with `(−1)!! = 1`.
pub fn double_factorial_odd(p: usize) -> Rational {
    (1..=p as i64).map(|i| r(2 * i - 1)).product()
}

/// Taylor coefficients in `t²` of `u(t) = N e^{−t²/2} ₁F₁(1+N; 2; t²)`;
/// the `t^{2p}` coefficient times `(2p)!` is the GUE moment `m_{2p}`.
pub fn gue_u_series(p_max: usize, n: &Rational) -> Vec<Rational> {
    let exp: Vec<Rational> = (0..=p_max)
        .map(|i| Rational::new(-1, 2).pow(i as i32) / Rational::from(factorial(i as u32)))
        .collect();
    let mut hyp = vec![Rational::one()];
    for k in 1..=p_max {
        // (1+N)_k / ((2)_k k!) from the previous term
        let prev = hyp[k - 1].clone();
        hyp.push(prev * (n + &r(k as i64)) / (r(k as i64 + 1) * r(k as i64)));
    }
    (0..=p_max)
        .map(|p| n * &(0..=p).map(|i| &exp[i] * &hyp[p - i]).sum::<Rational>())
        .collect()
}

/// One term `c t^j D^k` of a linear ODE in `t`.
type OdeTerm = (u32, usize, Rational);

/// Coefficients of `Σ c t^j D^k u` for the dense `u = Σ a_m t^m`, as far as
/// the known coefficients of `u` determine them.
fn apply_t_ode(terms: &[OdeTerm], a: &[Rational]) -> Vec<Rational> {
    let top = a.len() as i64 - 1;
    let shift = terms
        .iter()
        .map(|&(j, k, _)| j as i64 - k as i64)
        .min()
        .unwrap_or(0);
    (0..=(top + shift).max(-1))
        .map(|m| {
            let mut acc = Rational::zero();
            for (j, k, c) in terms {
                let src = m - *j as i64 + *k as i64;
                if src < *k as i64 {
                    continue;
                }
                let falling: Rational = (0..*k as i64).map(|i| r(src - i)).product();
                acc += c * &(falling * &a[src as usize]);
            }
            acc
        })
        .collect()
}

fn ode_terms(e: EnsembleTag, n: &Rational) -> Vec<OdeTerm> {
    let one = Rational::one();
    match e {
        // t u'' + 3u' − t(t² + 4N) u
        EnsembleTag::Gue => vec![
            (1, 2, one.clone()),
            (0, 1, r(3)),
            (3, 0, r(-1)),
            (1, 0, -(r(4) * n)),
        ],
        EnsembleTag::Goe => {
            let nn = n * n;
            vec![
                (1, 4, one),
                (0, 3, r(5)),
                (3, 2, r(-5)),
                (1, 2, -(r(8) * n - r(4))),
                (2, 1, r(-36)),
                (0, 1, -(r(20) * n - r(10))),
                (5, 0, r(4)),
                (3, 0, r(20) * n - r(10)),
                (1, 0, r(16) * &nn - r(16) * n - r(44)),
            ]
        }
        EnsembleTag::Gse => {
            let nn = n * n;
            vec![
                (1, 4, one),
                (0, 3, r(5)),
                (3, 2, Rational::new(-5, 4)),
                (1, 2, -(r(8) * n + r(2))),
                (2, 1, r(-9)),
                (0, 1, -(r(20) * n + r(5))),
                (5, 0, Rational::new(1, 4)),
                (3, 0, r(5) * n + Rational::new(5, 4)),
                (1, 0, r(16) * &nn + r(8) * n - r(11)),
            ]
        }
    }
}

/// Dense `t`-coefficients of `u(t) = Σ m_{2p} t^{2p} / (2p)!`.
fn egf(e: EnsembleTag, p_max: usize, n: &Rational) -> Vec<Rational> {
    let m = recurrence_moments(e, p_max, n);
    let mut a = vec![Rational::zero(); 2 * p_max + 1];
    for (p, v) in m.into_iter().enumerate() {
        a[2 * p] = v / Rational::from(factorial(2 * p as u32));
    }
    a
}

fn vanishes_through(v: &[Rational], top: usize) -> bool {
    v.len() > top && v[..=top].iter().all(Rational::is_zero)
}

/// Whether the recurrence moments make `u(t)` satisfy the ensemble's
/// generating-function ODE through `t^{2 p_max}`. For the GOE the reduced
/// second-order form in `U = u'' − (4t² + 4N − 2)u` is checked as well.
pub fn u_ode_check(e: EnsembleTag, p_max: usize, n: &Rational) -> bool {
    let top = 2 * p_max;
    // three orders of headroom for the derivatives
    let a = egf(e, p_max + 3, n);
    if !vanishes_through(&apply_t_ode(&ode_terms(e, n), &a), top) {
        return false;
    }
    if e != EnsembleTag::Goe {
        return true;
    }
    let shift = r(4) * n - r(2);
    let big_u = apply_t_ode(
        &[
            (0, 2, Rational::one()),
            (2, 0, r(-4)),
            (0, 0, -shift.clone()),
        ],
        &a,
    );
    let reduced = [
        (1, 2, Rational::one()),
        (0, 1, r(5)),
        (3, 0, r(-1)),
        (1, 0, -shift),
    ];
    vanishes_through(&apply_t_ode(&reduced, &big_u), top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harer_zagier_low_orders() {
        let c = harer_zagier(3, 4);
        assert_eq!(c[0], r(4));
        assert_eq!(c[1], r(16));
        // m_4(4) = 4 (2·16 + 1) = 132, divided by 3!!
        assert_eq!(&c[2] * &double_factorial_odd(2), r(132));
    }

    #[test]
    fn u_series_boundary_data() {
        let n = r(7);
        let u = gue_u_series(2, &n);
        assert_eq!(u[0], n);
        assert_eq!(&u[1] * &r(2), r(49));
        assert_eq!(&u[2] * &r(24), r(7 * (2 * 49 + 1)));
    }

    #[test]
    fn perturbed_moments_fail_the_ode() {
        let n = r(3);
        let mut a = egf(EnsembleTag::Gue, 8, &n);
        assert!(vanishes_through(
            &apply_t_ode(&ode_terms(EnsembleTag::Gue, &n), &a),
            10
        ));
        a[6] += Rational::new(1, 720);
        assert!(!vanishes_through(
            &apply_t_ode(&ode_terms(EnsembleTag::Gue, &n), &a),
            10
        ));
    }
}
