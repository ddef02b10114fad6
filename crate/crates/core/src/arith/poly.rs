//! Sparse multivariate polynomials over ℚ.
//!
//! The alphabet is fixed: spectral variables `x0..x7` followed by the
//! coupling `g`, the deformation parameter `h`, the matrix size `N` and
//! `k` (standing for 1/κ). One-variable expressions use `x0` as `x`.
//! Terms are stored sorted by descending graded-lex order with no zero
//! coefficients, so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::rational::Rational;

pub const MAX_X: usize = 8;
pub const NVARS: usize = MAX_X + 4;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(u8),
    G,
    H,
    N,
    K,
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X(i) => {
                assert!((i as usize) < MAX_X, "x index {i} outside alphabet");
                i as usize
            }
            Var::G => MAX_X,
            Var::H => MAX_X + 1,
            Var::N => MAX_X + 2,
            Var::K => MAX_X + 3,
        }
    }

    pub fn from_index(i: usize) -> Var {
        match i {
            i if i < MAX_X => Var::X(i as u8),
            i if i == MAX_X => Var::G,
            i if i == MAX_X + 1 => Var::H,
            i if i == MAX_X + 2 => Var::N,
            i if i == MAX_X + 3 => Var::K,
            _ => panic!("variable index {i} outside alphabet"),
        }
    }

    pub fn name(self) -> String {
        match self {
            Var::X(0) => "x".to_string(),
            Var::X(i) => format!("x{i}"),
            Var::G => "g".to_string(),
            Var::H => "h".to_string(),
            Var::N => "N".to_string(),
            Var::K => "k".to_string(),
        }
    }
}

pub const X: Var = Var::X(0);

/// Exponent vector over the fixed alphabet.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub [u16; NVARS]);

impl Mono {
    pub fn one() -> Mono {
        Mono([0; NVARS])
    }

    pub fn var(v: Var, e: u16) -> Mono {
        let mut m = Mono::one();
        m.0[v.index()] = e;
        m
    }

    pub fn from_pairs(pairs: &[(Var, u16)]) -> Mono {
        let mut m = Mono::one();
        for &(v, e) in pairs {
            m.0[v.index()] += e;
        }
        m
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out = [0u16; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i]
                .checked_add(other.0[i])
                .expect("monomial exponent overflow");
        }
        Mono(out)
    }

    pub fn with(&self, v: Var, e: u16) -> Mono {
        let mut m = *self;
        m.0[v.index()] = e;
        m
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", Var::from_index(i).name())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Multiplicative hash for exponent vectors; the default SipHash dominates
/// the cost of large products otherwise.
#[derive(Default)]
pub struct MonoHasher(u64);

impl Hasher for MonoHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u16(&mut self, n: u16) {
        self.write_u64(n as u64);
    }

    fn write_usize(&mut self, n: usize) {
        self.write_u64(n as u64);
    }

    fn write_u64(&mut self, n: u64) {
        self.0 = (self.0.rotate_left(5) ^ n).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }
}

pub type MonoMap<V> = HashMap<Mono, V, BuildHasherDefault<MonoHasher>>;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: Vec<(Mono, Rational)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Mono::one(), c)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_int(c))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Mono::var(v, 1), Rational::one())
    }

    pub fn var_pow(v: Var, e: u16) -> Self {
        Self::monomial(Mono::var(v, e), Rational::one())
    }

    pub fn monomial(m: Mono, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a normalized polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Mono, Rational)>>(iter: I) -> Self {
        let mut acc: MonoMap<Rational> = MonoMap::default();
        for (m, c) in iter {
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(acc)
    }

    pub fn from_map(acc: MonoMap<Rational>) -> Self {
        let mut terms: Vec<(Mono, Rational)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, m: &Mono) -> Rational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&(Mono, Rational)> {
        self.terms.first()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        // Multiplying by a monomial preserves the graded-lex order.
        MultiPoly {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn mul_var(&self, v: Var, e: u16) -> Self {
        self.mul_mono(&Mono::var(v, e), &Rational::one())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn degree(&self, v: Var) -> Option<u16> {
        self.terms.iter().map(|(m, _)| m.exp(v)).max()
    }

    pub fn min_degree(&self, v: Var) -> Option<u16> {
        self.terms.iter().map(|(m, _)| m.exp(v)).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    /// Coefficients with respect to `v`: `self = Σ_d out[d]·v^d`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MultiPoly> {
        let Some(deg) = self.degree(v) else {
            return Vec::new();
        };
        let mut buckets: Vec<Vec<(Mono, Rational)>> = vec![Vec::new(); deg as usize + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(v) as usize].push((m.with(v, 0), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MultiPoly { terms: t }
            })
            .collect()
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in); coefficients must not involve `v`.
    pub fn from_coeffs_in(v: Var, coeffs: &[MultiPoly]) -> Self {
        let mut acc: MonoMap<Rational> = MonoMap::default();
        for (d, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mm = m.with(v, m.exp(v) + d as u16);
                *acc.entry(mm).or_insert_with(Rational::zero) += a;
            }
        }
        Self::from_map(acc)
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut terms: Vec<(Mono, Rational)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(v) > 0)
            .map(|(m, c)| {
                let e = m.exp(v);
                (m.with(v, e - 1), c * Rational::from_int(e as i64))
            })
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { terms }
    }

    /// Substitutes `v := r` by Horner's rule.
    pub fn substitute(&self, v: Var, r: &MultiPoly) -> Self {
        if !self.involves(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        let mut acc = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * r) + c;
        }
        acc
    }

    pub fn eval_var(&self, v: Var, r: &Rational) -> Self {
        self.substitute(v, &MultiPoly::constant(r.clone()))
    }

    /// Renames variables through `map` (old index -> new index). The map
    /// must be injective on the variables present.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Self {
        let mut idx = [0usize; NVARS];
        for (i, slot) in idx.iter_mut().enumerate() {
            *slot = map(Var::from_index(i)).index();
        }
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut out = [0u16; NVARS];
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    out[idx[i]] += e;
                }
            }
            (Mono(out), c.clone())
        }))
    }

    /// Floating evaluation with `vals` indexed by alphabet position.
    pub fn eval_f64(&self, vals: &[f64; NVARS]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64();
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t *= vals[i].powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Exact rational evaluation when every variable present is assigned.
    pub fn eval_rational(&self, assign: &[(Var, Rational)]) -> Option<Rational> {
        let mut p = self.clone();
        for (v, r) in assign {
            p = p.eval_var(*v, r);
        }
        if p.is_constant() {
            Some(p.constant_term())
        } else {
            None
        }
    }

    /// Divides by `v − r` (`r` free of `v`), returning quotient and remainder.
    pub fn div_linear(&self, v: Var, r: &MultiPoly) -> (MultiPoly, MultiPoly) {
        let mut c = self.coeffs_in(v);
        if c.is_empty() {
            return (MultiPoly::zero(), MultiPoly::zero());
        }
        let d = c.len() - 1;
        if d == 0 {
            return (MultiPoly::zero(), c.pop().unwrap());
        }
        let mut q = vec![MultiPoly::zero(); d];
        for i in (1..=d).rev() {
            let top = std::mem::take(&mut c[i]);
            c[i - 1] = &c[i - 1] + &(&top * r);
            q[i - 1] = top;
        }
        (MultiPoly::from_coeffs_in(v, &q), c.swap_remove(0))
    }

    /// Divides by `v² − r` (`r` free of `v`), returning quotient and the
    /// remainder `r1·v + r0`.
    pub fn div_quadratic(&self, v: Var, r: &MultiPoly) -> (MultiPoly, MultiPoly) {
        let mut c = self.coeffs_in(v);
        if c.len() < 3 {
            return (MultiPoly::zero(), self.clone());
        }
        let d = c.len() - 1;
        let mut q = vec![MultiPoly::zero(); d - 1];
        for i in (2..=d).rev() {
            let top = std::mem::take(&mut c[i]);
            c[i - 2] = &c[i - 2] + &(&top * r);
            q[i - 2] = top;
        }
        c.truncate(2);
        (
            MultiPoly::from_coeffs_in(v, &q),
            MultiPoly::from_coeffs_in(v, &c),
        )
    }

    fn merge(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        MultiPoly { terms: out }
    }

    /// Renders with the alphabet names, highest terms first.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&a.to_string());
                    s.push('*');
                }
                s.push_str(&format!("{m:?}"));
            }
        }
        s
    }

    /// LaTeX rendering, highest terms first: `37 x^{4}+123 g x^{2}`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if c.is_negative() {
                s.push('-');
            } else if k > 0 {
                s.push('+');
            }
            let a = c.abs();
            let mut vars = Vec::new();
            // g and h ahead of x, as in `123 g x^{2}`
            let order = (MAX_X..NVARS).chain(0..MAX_X);
            for i in order {
                let e = m.0[i];
                if e == 0 {
                    continue;
                }
                let v = Var::from_index(i);
                vars.push(match (v, e) {
                    (Var::K, _) => format!("\\kappa^{{-{e}}}"),
                    (_, 1) => v.name(),
                    _ => format!("{}^{{{e}}}", v.name()),
                });
            }
            let coef = if a.is_integer() {
                a.to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            };
            if vars.is_empty() {
                s.push_str(&coef);
            } else {
                if !a.is_one() {
                    s.push_str(&coef);
                    s.push(' ');
                }
                s.push_str(&vars.join(" "));
            }
        }
        s
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a, 'b> Add<&'b MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'b MultiPoly) -> MultiPoly {
        self.merge(rhs, false)
    }
}

impl<'a, 'b> Sub<&'b MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'b MultiPoly) -> MultiPoly {
        self.merge(rhs, true)
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl<'a> Neg for &'a MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl<'a, 'b> Mul<&'b MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'b MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_mono(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_mono(m, c);
        }
        let mut acc: MonoMap<Rational> = MonoMap::default();
        acc.reserve(self.terms.len() * rhs.terms.len() / 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let p = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        MultiPoly::from_map(acc)
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> MultiPoly {
        let mut acc: MonoMap<Rational> = MonoMap::default();
        for p in iter {
            for (m, c) in p.terms {
                *acc.entry(m).or_insert_with(Rational::zero) += c;
            }
        }
        MultiPoly::from_map(acc)
    }
}

/// Shorthand constructors used across the crate.
pub fn x() -> MultiPoly {
    MultiPoly::var(X)
}

pub fn g() -> MultiPoly {
    MultiPoly::var(Var::G)
}

pub fn h() -> MultiPoly {
    MultiPoly::var(Var::H)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let p = &(&x() + &g()) * &(&x() - &g());
        let expect = &x().pow(2) - &g().pow(2);
        assert_eq!(p, expect);
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = &x().pow(3) + &g();
        assert!((&p - &p).terms().is_empty());
    }

    #[test]
    fn quadratic_division_exact() {
        // (x^2 - 4g)(x + g) divided by x^2 - 4g
        let q0 = &x() + &g();
        let y2 = &x().pow(2) - &g().scale(&Rational::from_int(4));
        let p = &y2 * &q0;
        let four_g = g().scale(&Rational::from_int(4));
        let (q, r) = p.div_quadratic(X, &four_g);
        assert_eq!(q, q0);
        assert!(r.is_zero());
    }

    #[test]
    fn linear_division_remainder() {
        let x1 = MultiPoly::var(Var::X(1));
        let p = &x().pow(2) - &x1.pow(2);
        let (q, r) = p.div_linear(X, &x1);
        assert_eq!(q, &x() + &x1);
        assert!(r.is_zero());
        let (_, r) = (&p + &MultiPoly::one()).div_linear(X, &x1);
        assert_eq!(r, MultiPoly::one());
    }

    #[test]
    fn substitution_and_rename() {
        let x1 = MultiPoly::var(Var::X(1));
        let p = &x().pow(2) + &g();
        let s = p.substitute(X, &(&x1 + &MultiPoly::one()));
        assert_eq!(
            s,
            &(&x1.pow(2) + &x1.scale(&Rational::from_int(2))) + &(&MultiPoly::one() + &g())
        );
        let r = p.rename(&|v| if v == X { Var::X(1) } else { v });
        assert_eq!(r, &x1.pow(2) + &g());
    }
}
