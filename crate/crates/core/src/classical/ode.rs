//! Resolvent ODEs at β = 1, 2, 4 and the residual left by the truncated
//! large-N expansion.
//!
//! With `ε = g/N` and `V = (g/N) W_1 = Σ_l ε^l κ^{-l/2} W_1^l`, each ODE
//! multiplied through by `g/N` has coefficients polynomial in `x`, `g`, `ε`.

use std::collections::BTreeMap;

use crate::arith::poly::{g, x};
use crate::arith::{MultiPoly, Rational, Var};
use crate::spectral::SpectralExpr;

use super::EnsembleTag;

#[derive(Clone, Debug, PartialEq)]
pub struct OdeSpec {
    pub order: usize,
    /// `coeffs[k][j]`: polynomial in `x`, `g` multiplying `ε^j V^{(k)}`.
    pub coeffs: Vec<Vec<MultiPoly>>,
    /// `rhs[j]`: coefficient of `ε^j` on the right.
    pub rhs: Vec<MultiPoly>,
}

fn q(n: i64, d: i64) -> MultiPoly {
    MultiPoly::constant(Rational::new(n, d))
}

fn c(n: i64) -> MultiPoly {
    MultiPoly::int(n)
}

impl OdeSpec {
    pub fn for_ensemble(e: EnsembleTag) -> OdeSpec {
        let x2 = x().pow(2);
        let x4 = x().pow(4);
        let gg = g().pow(2);
        let z = MultiPoly::zero;
        let y2 = &x2 - &(&c(4) * &g());
        let quartic = &(&(-&x4) + &(&c(8) * &(&g() * &x2))) - &(&c(16) * &gg);
        let rhs0 = &(&c(2) * &g()) * &y2;
        match e {
            // ε² V''' + (4g − x²) V' + x V = 2g
            EnsembleTag::Gue => OdeSpec {
                order: 3,
                coeffs: vec![vec![x()], vec![-&y2], vec![], vec![z(), z(), c(1)]],
                rhs: vec![&c(2) * &g()],
            },
            EnsembleTag::Goe => OdeSpec {
                order: 5,
                coeffs: vec![
                    vec![&x() * &y2, &c(2) * &x()],
                    vec![quartic, &(&c(-4) * &x2) + &(&c(16) * &g()), c(2)],
                    vec![z(), z(), &c(-6) * &x()],
                    vec![z(), z(), &c(5) * &y2, c(10)],
                    vec![],
                    vec![z(), z(), z(), z(), c(-4)],
                ],
                rhs: vec![rhs0, &c(10) * &g()],
            },
            EnsembleTag::Gse => OdeSpec {
                order: 5,
                coeffs: vec![
                    vec![&x() * &y2, -&x()],
                    vec![quartic, &(&c(2) * &x2) - &(&c(8) * &g()), q(1, 2)],
                    vec![z(), z(), &q(-3, 2) * &x()],
                    vec![z(), z(), &q(5, 4) * &y2, q(-5, 4)],
                    vec![],
                    vec![z(), z(), z(), z(), q(-1, 4)],
                ],
                rhs: vec![rhs0, &c(-5) * &g()],
            },
        }
    }

    fn eps_degree(&self) -> usize {
        self.coeffs
            .iter()
            .map(|row| row.len())
            .chain(std::iter::once(self.rhs.len()))
            .max()
            .unwrap_or(1)
            - 1
    }
}

/// `κ^{-l/2} W_1^l` at a rational κ, through `h^a κ^{-l/2} = (1−k)^a k^{(l−a)/2}`.
pub fn specialize_kappa(w: &SpectralExpr, l: usize, kappa: &Rational) -> SpectralExpr {
    let k = kappa.recip();
    let one_minus_k = &Rational::one() - &k;
    w.map_numerators(&|p: &MultiPoly| {
        MultiPoly::from_terms(p.terms().iter().map(|(m, v)| {
            let a = m.exp(Var::H) as i32;
            let rest = l as i32 - a;
            assert!(rest % 2 == 0, "h^{a} at order {l} leaves a half power of κ");
            (
                m.with(Var::H, 0),
                v * &(one_minus_k.pow(a) * k.pow(rest / 2)),
            )
        }))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub ensemble: EnsembleTag,
    pub l_max: usize,
    /// Lowest `j` whose `ε^j = (g/N)^j` residual coefficient is nonzero.
    pub first_nonzero: Option<usize>,
    /// Highest `j` examined.
    pub checked_through: usize,
}

/// Substitute `W_1^0 … W_1^{l_max}` into the ensemble's resolvent ODE and
/// locate the first nonvanishing order in `1/N`.
pub fn ode_residual(e: EnsembleTag, resolvent: &[SpectralExpr]) -> ResidualReport {
    let spec = OdeSpec::for_ensemble(e);
    let kappa = e.kappa();
    let l_max = resolvent.len().saturating_sub(1);
    // derivatives of each specialized V_l
    let derivs: Vec<Vec<SpectralExpr>> = resolvent
        .iter()
        .enumerate()
        .map(|(l, w)| {
            let mut d = vec![specialize_kappa(w, l, &kappa)];
            for k in 1..=spec.order {
                let next = d[k - 1].derivative();
                d.push(next);
            }
            d
        })
        .collect();
    let top = l_max + spec.eps_degree();
    let mut first = None;
    for jj in 0..=top {
        let mut acc = SpectralExpr::zero();
        for (k, row) in spec.coeffs.iter().enumerate() {
            for (j, coef) in row.iter().enumerate() {
                if coef.is_zero() || j > jj || jj - j > l_max {
                    continue;
                }
                acc = acc.add(&derivs[jj - j][k].mul_poly(coef));
            }
        }
        if let Some(r) = spec.rhs.get(jj) {
            acc = acc.sub(&SpectralExpr::poly(r.clone()));
        }
        if !acc.is_zero() {
            first = Some(jj);
            break;
        }
    }
    ResidualReport {
        ensemble: e,
        l_max,
        first_nonzero: first,
        checked_through: top,
    }
}

/// Coefficients `C_{j,r}` (polynomials in `g`) of the GUE expansion
/// `(g/N) W_1 = Σ_j η_j N^{-2j}`, `η_j = Σ_r C_{j,r} y^{-2r-1}`, for
/// `1 ≤ j ≤ j_max`. Index 0 of the result is `j = 1`.
pub fn eta_coefficients(j_max: usize) -> Vec<BTreeMap<usize, MultiPoly>> {
    let mut out: Vec<BTreeMap<usize, MultiPoly>> = Vec::new();
    if j_max == 0 {
        return out;
    }
    out.push(BTreeMap::from([(2, g().pow(3))]));
    for j in 1..j_max {
        let prev = &out[j - 1];
        let get = |r: usize| prev.get(&r).cloned().unwrap_or_else(MultiPoly::zero);
        let mut next = BTreeMap::new();
        for r in (2 * j + 2)..=(3 * j + 2) {
            let ri = r as i64;
            let lead = Rational::new((2 * ri - 3) * (2 * ri - 1), ri + 1);
            let inner = &get(r - 2).scale(&Rational::from_int(ri - 1))
                + &(&g() * &get(r - 3)).scale(&Rational::from_int(4 * ri - 10));
            let val = (&g().pow(2) * &inner).scale(&lead);
            if !val.is_zero() {
                next.insert(r, val);
            }
        }
        out.push(next);
    }
    out
}

/// `η_j` as a spectral expression.
pub fn eta_function(coeffs: &BTreeMap<usize, MultiPoly>) -> SpectralExpr {
    coeffs.iter().fold(SpectralExpr::zero(), |acc, (r, c)| {
        acc.add(&SpectralExpr::term(c.clone(), 2 * *r as i32 + 1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_two_matches_w4_at_h_zero() {
        let c = eta_coefficients(2);
        assert_eq!(c[0][&2], g().pow(3));
        assert_eq!(c[1][&4], g().pow(5).scale(&Rational::from_int(21)));
        assert_eq!(c[1][&5], g().pow(6).scale(&Rational::from_int(105)));
    }

    #[test]
    fn spec_orders() {
        assert_eq!(OdeSpec::for_ensemble(EnsembleTag::Gue).order, 3);
        assert_eq!(OdeSpec::for_ensemble(EnsembleTag::Goe).coeffs.len(), 6);
    }
}
