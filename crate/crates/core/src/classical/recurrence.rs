//! Linear difference equations for `m_{2p}(N, κ)` at κ = 1, 1/2, 2.

use crate::arith::{Coeff, MultiPoly, Rational, Var};

use super::EnsembleTag;

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

/// `[m_0, m_2, …, m_{2 p_max}]` with `N` an element of any coefficient ring.
pub fn recurrence_in<C: Coeff>(e: EnsembleTag, p_max: usize, n: &C) -> Vec<C> {
    let one = C::one();
    let m2 = match e {
        EnsembleTag::Gue => n.mul(n),
        EnsembleTag::Goe => n.mul(&n.add(&one)),
        EnsembleTag::Gse => n.mul(&n.sub(&one.scale(&Rational::new(1, 2)))),
    };
    let mut m = vec![n.clone(), m2];
    let nn = n.mul(n);
    for p in 2..=p_max as i64 {
        let at = |q: i64| -> C {
            if q < 0 {
                C::zero()
            } else {
                m[q as usize].clone()
            }
        };
        let rhs = match e {
            EnsembleTag::Gue => n
                .mul(&at(p - 1))
                .scale(&r(4 * p - 2))
                .add(&at(p - 2).scale(&r((p - 1) * (2 * p - 1) * (2 * p - 3)))),
            EnsembleTag::Goe => {
                let two_n1 = n.scale(&r(2)).sub(&one);
                let quad = one
                    .scale(&r(10 * p * p - 9 * p))
                    .sub(&nn.scale(&r(8)))
                    .add(&n.scale(&r(8)));
                let f3 = (2 * p - 3) * (2 * p - 4) * (2 * p - 5);
                two_n1
                    .mul(&at(p - 1))
                    .scale(&r(4 * p - 1))
                    .add(&quad.mul(&at(p - 2)).scale(&r(2 * p - 3)))
                    .sub(&two_n1.mul(&at(p - 3)).scale(&r(5 * f3)))
                    .sub(&at(p - 4).scale(&r(2 * f3 * (2 * p - 6) * (2 * p - 7))))
            }
            EnsembleTag::Gse => {
                let four_n1 = n.scale(&r(4)).add(&one);
                let quad = one
                    .scale(&r(10 * p * p - 9 * p))
                    .sub(&nn.scale(&r(32)))
                    .sub(&n.scale(&r(16)));
                let f3 = (2 * p - 3) * (2 * p - 4) * (2 * p - 5);
                four_n1
                    .mul(&at(p - 1))
                    .scale(&Rational::new((4 * p - 1) as i64, 2))
                    .add(&quad.mul(&at(p - 2)).scale(&Rational::new(2 * p - 3, 4)))
                    .sub(&four_n1.mul(&at(p - 3)).scale(&Rational::new(5 * f3, 8)))
                    .sub(&at(p - 4).scale(&Rational::new(f3 * (2 * p - 6) * (2 * p - 7), 8)))
            }
        };
        m.push(rhs.scale(&Rational::new(1, p + 1)));
    }
    m.truncate(p_max + 1);
    m
}

/// Exact moments at a rational `N`.
pub fn recurrence_moments(e: EnsembleTag, p_max: usize, n: &Rational) -> Vec<Rational> {
    recurrence_in(e, p_max, n)
}

/// Moments as polynomials in `N`.
pub fn recurrence_moments_symbolic(e: EnsembleTag, p_max: usize) -> Vec<MultiPoly> {
    recurrence_in(e, p_max, &MultiPoly::var(Var::N))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_poly(c: &[i64]) -> MultiPoly {
        (0..c.len())
            .map(|i| MultiPoly::var_pow(Var::N, i as u16).scale(&r(c[i])))
            .sum()
    }

    #[test]
    fn symbolic_lists() {
        let gue = recurrence_moments_symbolic(EnsembleTag::Gue, 6);
        // 33 N (4N^6 + 70N^4 + 196N^2 + 45)
        assert_eq!(
            gue[6],
            n_poly(&[0, 33 * 45, 0, 33 * 196, 0, 33 * 70, 0, 33 * 4])
        );
        let goe = recurrence_moments_symbolic(EnsembleTag::Goe, 6);
        assert_eq!(goe[2], n_poly(&[0, 5, 5, 2]));
        assert_eq!(
            goe[6],
            n_poly(&[0, 166377, 258479, 167148, 58760, 12798, 1586, 132])
        );
        let gse = recurrence_moments_symbolic(EnsembleTag::Gse, 6);
        assert_eq!(gse[2].scale(&r(4)), n_poly(&[0, 5, -10, 8]));
        assert_eq!(
            gse[6].scale(&r(64)),
            n_poly(&[0, 166377, -516958, 668592, -470080, 204768, -50752, 8448])
        );
    }

    #[test]
    fn numeric_matches_symbolic() {
        for e in EnsembleTag::ALL {
            let sym = recurrence_moments_symbolic(e, 8);
            let num = recurrence_moments(e, 8, &r(5));
            for (s, v) in sym.iter().zip(&num) {
                assert_eq!(s.eval_rational(&[(Var::N, r(5))]).unwrap(), *v);
            }
        }
    }
}
