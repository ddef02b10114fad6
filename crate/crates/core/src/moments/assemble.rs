use std::collections::BTreeMap;

use crate::arith::rational::binomial_int;
use crate::arith::{MultiPoly, Rational, Var};
use crate::error::MomentError;
use crate::loops::{LaurentCorrelator, LaurentHierarchy};
use crate::spectral::SpectralExpr;

use super::MomentPoly;

/// `ĉ_{l,p}(h)`: the coefficient of `x^{-2p-1}` in `W_1^l` with its factor
/// `g^{p+1-l}` removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolventCoefficients {
    table: Vec<Vec<MultiPoly>>,
}

impl ResolventCoefficients {
    /// From closed forms; asserts the `g` dependence is the single power
    /// fixed by homogeneity.
    pub fn from_resolvent(ws: &[SpectralExpr], p_max: usize) -> Result<Self, MomentError> {
        let order = 2 * p_max as i32 + 1;
        let mut table = Vec::with_capacity(ws.len());
        for (l, w) in ws.iter().enumerate() {
            let s = w.series_at_infinity(order);
            let mut row = Vec::with_capacity(p_max + 1);
            for p in 0..=p_max {
                let c = s.coeff(2 * p as i32 + 1);
                let want = p as i64 + 1 - l as i64;
                let mut stripped = MultiPoly::zero();
                for (m, v) in c.terms() {
                    if m.exp(Var::G) as i64 != want {
                        return Err(MomentError::GDependence {
                            n_power: want,
                            detail: format!("W_1^{l} at x^-{}: {}", 2 * p + 1, c.to_text()),
                        });
                    }
                    stripped = &stripped + &MultiPoly::monomial(m.with(Var::G, 0), v.clone());
                }
                row.push(stripped);
            }
            table.push(row);
        }
        Ok(ResolventCoefficients { table })
    }

    /// From the hierarchy expanded at infinity (`g = 1`), truncated just
    /// deep enough for `x^{-2 p_max - 1}`.
    pub fn from_series(l_max: usize, p_max: usize) -> Self {
        let trunc = 2 * p_max as i32 + 1;
        let mut store = LaurentHierarchy::with_base(LaurentCorrelator::base_with(trunc));
        let table = (0..=l_max)
            .map(|l| {
                let w = store
                    .ensure(1, l)
                    .expect("series hierarchy has no failure modes");
                (0..=p_max)
                    .map(|p| w.coeff(&[2 * p as i8 + 1]).to_multipoly())
                    .collect()
            })
            .collect();
        ResolventCoefficients { table }
    }

    pub fn l_max(&self) -> usize {
        self.table.len().saturating_sub(1)
    }

    pub fn p_max(&self) -> usize {
        self.table
            .first()
            .map(|r| r.len().saturating_sub(1))
            .unwrap_or(0)
    }

    pub fn get(&self, l: usize, p: usize) -> &MultiPoly {
        &self.table[l][p]
    }
}

/// `m_{2p}` from explicit `W_1^0 … W_1^{l}`, `l ≥ p`.
pub fn moment_polynomial(p: usize, resolvent: &[SpectralExpr]) -> Result<MomentPoly, MomentError> {
    if resolvent.len() < p + 1 {
        return Err(MomentError::InsufficientOrder {
            moment: 2 * p,
            needed: p,
            available: resolvent.len().saturating_sub(1),
        });
    }
    let table = ResolventCoefficients::from_resolvent(&resolvent[..=p], p)?;
    moment_polynomial_from(p, &table)
}

/// `m_{2p} = Σ_l N^{p+1-l} κ^{-l/2} ĉ_{l,p}(h)` with `h^a κ^{-l/2} = (1-k)^a k^{(l-a)/2}`.
pub fn moment_polynomial_from(
    p: usize,
    table: &ResolventCoefficients,
) -> Result<MomentPoly, MomentError> {
    if table.table.len() < p + 1 || table.p_max() < p {
        return Err(MomentError::InsufficientOrder {
            moment: 2 * p,
            needed: p,
            available: table.l_max().min(table.p_max()),
        });
    }
    let mut coeffs: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
    for l in 0..=p {
        let npow = (p + 1 - l) as u32;
        for (m, c) in table.get(l, p).terms() {
            let a = m.exp(Var::H) as usize;
            if m.degree() != a as u32 {
                return Err(MomentError::GDependence {
                    n_power: npow as i64,
                    detail: table.get(l, p).to_text(),
                });
            }
            if a > l || (l - a) % 2 != 0 {
                return Err(MomentError::HalfKappa {
                    h_power: a as u16,
                    l,
                });
            }
            let shift = ((l - a) / 2) as u32;
            // (1 - k)^a
            for j in 0..=a {
                let b = binomial_int(a as i64, j as i64);
                let sign = if j % 2 == 0 { b } else { -b };
                *coeffs
                    .entry((npow, j as u32 + shift))
                    .or_insert_with(Rational::zero) += &(c * &sign);
            }
        }
    }
    Ok(MomentPoly::new(p, coeffs))
}
