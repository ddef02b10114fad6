//! Truncated expansion of correlators at infinity, `g = 1`.
//!
//! An element is `Σ c_d(h) ∏ x_i^{-d_i}` keeping only terms of total degree
//! `Σ d_i ≤ D`. Every operation the hierarchy uses maps terms of degree `t`
//! to degree `≥ t`, so a hierarchy seeded with `W_1^0` exact through `D`
//! stays exact through `D`. Products with `x` (only in the residual) lower
//! the degree by one; the residual is then exact through `D − 1`.

use std::collections::HashMap;

use crate::arith::{MultiPoly, Rational, Var, MAX_X};
use crate::error::SpectralError;
use crate::spectral::SpectralExpr;

use super::ring::LoopRing;

/// Polynomial in `h`, dense, lowest power first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HPoly(Vec<Rational>);

impl HPoly {
    pub fn constant(c: Rational) -> Self {
        HPoly(vec![c]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    fn add_assign(&mut self, o: &HPoly) {
        if self.0.len() < o.0.len() {
            self.0.resize(o.0.len(), Rational::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += b;
        }
        let t = std::mem::take(self).trimmed();
        *self = t;
    }

    fn scale(&self, c: &Rational) -> HPoly {
        HPoly(self.0.iter().map(|a| a * c).collect()).trimmed()
    }

    fn mul(&self, o: &HPoly) -> HPoly {
        if self.is_zero() || o.is_zero() {
            return HPoly::default();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        HPoly(out).trimmed()
    }

    fn shift(&self) -> HPoly {
        if self.is_zero() {
            return HPoly::default();
        }
        let mut v = vec![Rational::zero()];
        v.extend(self.0.iter().cloned());
        HPoly(v)
    }

    pub fn to_multipoly(&self) -> MultiPoly {
        self.0
            .iter()
            .enumerate()
            .map(|(k, c)| MultiPoly::var_pow(Var::H, k as u16).scale(c))
            .sum()
    }
}

type Key = [i8; MAX_X];

/// `Σ c ∏ x_i^{-d_i}` truncated at total degree `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentCorrelator {
    n: usize,
    trunc: i32,
    terms: HashMap<Key, HPoly>,
}

/// Default truncation when the base case is built without an explicit degree.
pub const DEFAULT_TRUNCATION: i32 = 25;

fn degree(k: &Key) -> i32 {
    k.iter().map(|&d| d as i32).sum()
}

fn binomial_central(m: usize) -> Rational {
    crate::arith::rational::binomial_int(2 * m as i64, m as i64)
}

impl LaurentCorrelator {
    pub fn zero_with(n: usize, trunc: i32) -> Self {
        LaurentCorrelator {
            n,
            trunc,
            terms: HashMap::new(),
        }
    }

    /// `W_1^0 = (x − y)/2 = Σ_m C_m x^{-2m-1}` through degree `trunc`.
    pub fn base_with(trunc: i32) -> Self {
        let mut out = Self::zero_with(1, trunc);
        let mut m = 0usize;
        while 2 * m as i32 + 1 <= trunc {
            let cat = binomial_central(m) / Rational::from_int(m as i64 + 1);
            let mut k = [0i8; MAX_X];
            k[0] = (2 * m + 1) as i8;
            out.push(k, HPoly::constant(cat));
            m += 1;
        }
        out
    }

    pub fn truncation(&self) -> i32 {
        self.trunc
    }

    /// Coefficient of `∏ x_i^{-d_i}`.
    pub fn coeff(&self, d: &[i8]) -> HPoly {
        let mut k = [0i8; MAX_X];
        k[..d.len()].copy_from_slice(d);
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i8], &HPoly)> {
        let n = self.n;
        self.terms.iter().map(move |(k, c)| (&k[..n], c))
    }

    fn push(&mut self, k: Key, c: HPoly) {
        if c.is_zero() || degree(&k) > self.trunc {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(e) => {
                e.add_assign(&c);
                if e.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    fn map_terms(&self, f: impl Fn(&Key, &HPoly) -> Option<(Key, HPoly)>) -> Self {
        let mut out = Self::zero_with(self.n, self.trunc);
        for (k, c) in &self.terms {
            if let Some((k2, c2)) = f(k, c) {
                out.push(k2, c2);
            }
        }
        out
    }
}

impl LoopRing for LaurentCorrelator {
    fn zero(n: usize) -> Self {
        Self::zero_with(n, i32::MAX)
    }

    fn base() -> Self {
        Self::base_with(DEFAULT_TRUNCATION)
    }

    fn x0(n: usize) -> Self {
        let mut out = Self::zero(n);
        let mut k = [0i8; MAX_X];
        k[0] = -1;
        out.push(k, HPoly::constant(Rational::one()));
        out
    }

    fn n(&self) -> usize {
        self.n
    }

    fn embed(&self, new_n: usize, map: &[usize]) -> Self {
        let mut out = Self::zero_with(new_n, self.trunc);
        for (k, c) in &self.terms {
            let mut k2 = [0i8; MAX_X];
            for (i, &m) in map.iter().enumerate() {
                k2[m] = k[i];
            }
            out.push(k2, c.clone());
        }
        out
    }

    fn mul(&self, o: &Self) -> Self {
        let trunc = self.trunc.min(o.trunc);
        let mut out = Self::zero_with(self.n.max(o.n), trunc);
        for (ka, ca) in &self.terms {
            let da = degree(ka);
            for (kb, cb) in &o.terms {
                if da + degree(kb) > trunc {
                    continue;
                }
                let mut k = *ka;
                for i in 0..MAX_X {
                    k[i] += kb[i];
                }
                out.push(k, ca.mul(cb));
            }
        }
        out
    }

    fn add_assign(&mut self, o: &Self) {
        self.trunc = self.trunc.min(o.trunc);
        self.terms.retain(|k, _| degree(k) <= o.trunc);
        for (k, c) in &o.terms {
            self.push(*k, c.clone());
        }
    }

    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(&o.scale_int(-1));
        out
    }

    fn scale_int(&self, c: i64) -> Self {
        let c = Rational::from_int(c);
        self.map_terms(|k, v| Some((*k, v.scale(&c))))
    }

    fn mul_h(&self) -> Self {
        self.map_terms(|k, v| Some((*k, v.shift())))
    }

    fn merge_first_pair(&self) -> Result<Self, SpectralError> {
        let mut out = Self::zero_with(self.n - 1, self.trunc);
        for (k, c) in &self.terms {
            let mut k2 = [0i8; MAX_X];
            k2[0] = k[0] + k[1];
            k2[1..MAX_X - 1].copy_from_slice(&k[2..]);
            out.push(k2, c.clone());
        }
        Ok(out)
    }

    fn dx(&self, i: usize) -> Self {
        self.map_terms(|k, v| {
            if k[i] == 0 {
                return None;
            }
            let mut k2 = *k;
            k2[i] += 1;
            Some((k2, v.scale(&Rational::from_int(-(k[i] as i64)))))
        })
    }

    /// Exact division by `x_i − x_j = (v − u)/(uv)` with `u = 1/x_i`,
    /// `v = 1/x_j`; panics when the numerator does not vanish at `x_i = x_j`.
    fn div_x_difference(&self, i: usize, j: usize) -> Self {
        // group by the exponents of the other variables and by d_i + d_j,
        // then divide each homogeneous slice P(u, v) by (v − u)
        let mut groups: HashMap<(Key, i8), Vec<(i8, HPoly)>> = HashMap::new();
        for (k, c) in &self.terms {
            let mut rest = *k;
            let s = k[i] + k[j];
            rest[i] = 0;
            rest[j] = 0;
            groups.entry((rest, s)).or_default().push((k[j], c.clone()));
        }
        let mut out = Self::zero_with(self.n, self.trunc);
        for ((rest, s), mut slice) in groups {
            // P = Σ_b p_b u^{s-b} v^b; Q = Σ_b q_b u^{s-1-b} v^b with
            // p_b = q_{b-1} − q_b, so q_b = Σ_{c≤b} −p_c.
            slice.sort_by_key(|(b, _)| *b);
            let lo = slice[0].0;
            let hi = slice.last().unwrap().0;
            let mut p: HashMap<i8, HPoly> = slice.into_iter().collect();
            let mut acc = HPoly::default();
            for b in lo..hi {
                if let Some(pb) = p.remove(&b) {
                    acc.add_assign(&pb.scale(&Rational::from_int(-1)));
                }
                if acc.is_zero() {
                    continue;
                }
                // q_b u^{s-1-b} v^b · uv
                let mut k = rest;
                k[i] = s - b;
                k[j] = b + 1;
                out.push(k, acc.clone());
            }
            // Σ p_b = 0, i.e. p_hi = q_{hi-1}
            let mut last = p.remove(&hi).unwrap_or_default();
            last.add_assign(&acc.scale(&Rational::from_int(-1)));
            assert!(last.is_zero(), "numerator does not vanish at x{i} = x{j}");
        }
        out
    }

    /// Multiplication by `1/y = Σ_m binom(2m, m) x^{-2m-1}` in `x_i`.
    fn div_y(&self, i: usize) -> Self {
        let mut out = Self::zero_with(self.n, self.trunc);
        for (k, c) in &self.terms {
            let d = degree(k);
            let mut m = 0usize;
            while d + 2 * m as i32 + 1 <= self.trunc {
                let mut k2 = *k;
                k2[i] += (2 * m + 1) as i8;
                out.push(k2, c.scale(&binomial_central(m)));
                m += 1;
            }
        }
        out
    }

    fn canonicalize(&self) -> Self {
        self.clone()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn validate(&self) -> Result<(), SpectralError> {
        Ok(())
    }

    fn size(&self) -> usize {
        self.terms.values().map(|c| c.0.len()).sum()
    }

    fn to_w1(&self, _l: usize) -> Option<SpectralExpr> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_is_catalan() {
        let w = LaurentCorrelator::base_with(9);
        let cats = [1, 1, 2, 5, 14];
        for (m, &c) in cats.iter().enumerate() {
            assert_eq!(
                w.coeff(&[2 * m as i8 + 1]),
                HPoly::constant(Rational::from_int(c))
            );
        }
    }

    #[test]
    fn base_solves_quadratic() {
        // W² − x W + 1 = 0 at g = 1, exact through degree D − 1
        let w = LaurentCorrelator::base_with(11);
        let mut r = w.mul(&w).sub(&LaurentCorrelator::x0(1).mul(&w));
        r.add_assign(&{
            let mut one = LaurentCorrelator::zero_with(1, 11);
            one.push([0; MAX_X], HPoly::constant(Rational::one()));
            one
        });
        assert!(r.terms().all(|(k, _)| k[0] as i32 >= 10), "{r:?}");
    }

    #[test]
    fn difference_quotient() {
        // (x0^{-2} − x1^{-2}) / (x0 − x1) = −(x0^{-2} x1^{-1} + x0^{-1} x1^{-2})
        let mut f = LaurentCorrelator::zero_with(2, 20);
        f.push([2, 0, 0, 0, 0, 0, 0, 0], HPoly::constant(Rational::one()));
        f.push(
            [0, 2, 0, 0, 0, 0, 0, 0],
            HPoly::constant(Rational::from_int(-1)),
        );
        let q = f.div_x_difference(0, 1);
        assert_eq!(q.coeff(&[2, 1]), HPoly::constant(Rational::from_int(-1)));
        assert_eq!(q.coeff(&[1, 2]), HPoly::constant(Rational::from_int(-1)));
        assert_eq!(q.terms().count(), 2);
    }
}
