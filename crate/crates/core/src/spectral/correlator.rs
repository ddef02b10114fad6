//! Multi-variable correlator expressions.
//!
//! A term is `P(x_0..x_{n-1}) · Π_i y_i^{-σ_i} · Π_{i<j} (x_i − x_j)^{-k_ij}`
//! with `y_i² = x_i² − 4g`. Terms are keyed by `(σ, k)`; the normal form
//! combines each y-parity class over a common denominator and cancels every
//! factor of `x_i² − 4g` and `x_i − x_j` that divides the numerator.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::expr::{sigma_floor, y_squared, SpectralExpr};
use crate::arith::poly::g;
use crate::arith::{MultiPoly, Rational, Var, MAX_X, NVARS, X};
use crate::error::SpectralError;

pub const NPAIRS: usize = MAX_X * (MAX_X - 1) / 2;

/// Largest `k_ij` allowed in a stored hierarchy correlator.
pub const POLE_CAP: u32 = 16;

/// Slot of the pair `(i, j)`, `i < j`.
pub fn pair(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub sigma: [i16; MAX_X],
    pub poles: [u8; NPAIRS],
}

impl TermKey {
    pub fn zero() -> Self {
        TermKey {
            sigma: [0; MAX_X],
            poles: [0; NPAIRS],
        }
    }

    pub fn pole(&self, i: usize, j: usize) -> u32 {
        if i < j {
            self.poles[pair(i, j)] as u32
        } else {
            self.poles[pair(j, i)] as u32
        }
    }

    fn add(&self, other: &TermKey) -> TermKey {
        let mut out = *self;
        for i in 0..MAX_X {
            out.sigma[i] += other.sigma[i];
        }
        for p in 0..NPAIRS {
            out.poles[p] = out.poles[p]
                .checked_add(other.poles[p])
                .expect("pole order overflow");
        }
        out
    }

    fn parity_mask(&self) -> u32 {
        self.sigma
            .iter()
            .enumerate()
            .fold(0, |m, (i, s)| m | ((s.rem_euclid(2) as u32) << i))
    }
}

impl fmt::Debug for TermKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ{:?}", &self.sigma)?;
        for j in 1..MAX_X {
            for i in 0..j {
                let k = self.poles[pair(i, j)];
                if k > 0 {
                    write!(f, " (x{i}-x{j})^-{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Correlator {
    n: usize,
    /// Hierarchy position `(n, l)` when the value is a stored `W_n^l`.
    pub tag: Option<(usize, usize)>,
    terms: BTreeMap<TermKey, MultiPoly>,
}

fn xv(i: usize) -> Var {
    Var::X(i as u8)
}

fn sign_pow(k: u32) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        Rational::from_int(-1)
    }
}

impl Correlator {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_X, "{n} variables exceed the alphabet");
        Correlator {
            n,
            tag: None,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, MultiPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_spectral(e: &SpectralExpr) -> Self {
        let mut c = Correlator::zero(1);
        for (s, p) in e.terms() {
            let mut k = TermKey::zero();
            k.sigma[0] = *s as i16;
            c.insert(k, p.clone());
        }
        c
    }

    /// The one-variable restriction; `None` if `n != 1`.
    pub fn to_spectral(&self) -> Option<SpectralExpr> {
        if self.n != 1 {
            return None;
        }
        Some(
            SpectralExpr::from_raw(
                self.terms
                    .iter()
                    .map(|(k, p)| (k.sigma[0] as i32, p.clone())),
            )
            .reduce(),
        )
    }

    pub fn insert(&mut self, key: TermKey, p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = &*v + &p;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, p);
            }
        }
    }

    pub fn add(&self, other: &Correlator) -> Correlator {
        assert_eq!(self.n, other.n, "variable counts differ");
        let mut out = self.clone();
        out.tag = None;
        for (k, p) in &other.terms {
            out.insert(*k, p.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Correlator) {
        assert_eq!(self.n, other.n, "variable counts differ");
        for (k, p) in &other.terms {
            self.insert(*k, p.clone());
        }
    }

    pub fn sub(&self, other: &Correlator) -> Correlator {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Correlator {
        let mut out = Correlator::zero(self.n);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(k, p)| (*k, p.scale(c))).collect();
        out
    }

    pub fn mul_poly(&self, q: &MultiPoly) -> Correlator {
        let mut out = Correlator::zero(self.n);
        for (k, p) in &self.terms {
            out.insert(*k, p * q);
        }
        out
    }

    pub fn mul(&self, other: &Correlator) -> Correlator {
        assert_eq!(self.n, other.n, "variable counts differ");
        let mut out = Correlator::zero(self.n);
        for (ka, pa) in &self.terms {
            for (kb, pb) in &other.terms {
                out.insert(ka.add(kb), pa * pb);
            }
        }
        out
    }

    /// Multiplies by `(x_i − x_j)^{-k}`.
    pub fn mul_pole(&self, i: usize, j: usize, k: u32) -> Correlator {
        assert!(i != j && i < self.n && j < self.n);
        let (a, b, s) = if i < j {
            (i, j, Rational::one())
        } else {
            (j, i, sign_pow(k))
        };
        let mut out = Correlator::zero(self.n);
        for (key, p) in &self.terms {
            let mut nk = *key;
            nk.poles[pair(a, b)] += k as u8;
            out.insert(nk, p.scale(&s));
        }
        out
    }

    pub fn divide_by_y(&self, i: usize) -> Correlator {
        let mut out = Correlator::zero(self.n);
        out.terms = self
            .terms
            .iter()
            .map(|(k, p)| {
                let mut nk = *k;
                nk.sigma[i] += 1;
                (nk, p.clone())
            })
            .collect();
        out
    }

    /// Relabels variable `i` as `map[i]` inside an `new_n`-variable space.
    pub fn embed(&self, new_n: usize, map: &[usize]) -> Correlator {
        assert!(map.len() >= self.n && new_n <= MAX_X);
        let rename = |v: Var| match v {
            Var::X(i) if (i as usize) < self.n => xv(map[i as usize]),
            other => other,
        };
        let mut out = Correlator::zero(new_n);
        for (key, p) in &self.terms {
            let mut nk = TermKey::zero();
            let mut sign = 0u32;
            for i in 0..self.n {
                nk.sigma[map[i]] = key.sigma[i];
            }
            for b in 1..self.n {
                for a in 0..b {
                    let k = key.poles[pair(a, b)];
                    if k == 0 {
                        continue;
                    }
                    let (na, nb) = (map[a], map[b]);
                    if na < nb {
                        nk.poles[pair(na, nb)] += k;
                    } else {
                        nk.poles[pair(nb, na)] += k;
                        sign += k as u32;
                    }
                }
            }
            out.insert(nk, p.rename(&rename).scale(&sign_pow(sign)));
        }
        out
    }

    /// Permutes variable labels.
    pub fn permute(&self, perm: &[usize]) -> Correlator {
        self.embed(self.n, perm)
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Correlator {
        let v = xv(i);
        let mut out = Correlator::zero(self.n);
        for (key, p) in &self.terms {
            out.insert(*key, p.derivative(v));
            let s = key.sigma[i];
            if s != 0 {
                let mut nk = *key;
                nk.sigma[i] += 2;
                out.insert(nk, p.mul_var(v, 1).scale(&Rational::from_int(-(s as i64))));
            }
            for j in 0..self.n {
                if j == i {
                    continue;
                }
                let k = key.pole(i, j);
                if k == 0 {
                    continue;
                }
                let mut nk = *key;
                // d/dx_i (x_i - x_j)^{-k} = -k (x_i - x_j)^{-k-1}
                // d/dx_i (x_j - x_i)^{-k} = +k (x_j - x_i)^{-k-1}
                let c = if i < j {
                    nk.poles[pair(i, j)] += 1;
                    -(k as i64)
                } else {
                    nk.poles[pair(j, i)] += 1;
                    k as i64
                };
                out.insert(nk, p.scale(&Rational::from_int(c)));
            }
        }
        out
    }

    pub fn max_pole_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|k| k.poles.iter().map(|&p| p as u32))
            .max()
            .unwrap_or(0)
    }

    /// Reports the first pair whose pole order exceeds [`POLE_CAP`].
    pub fn check_pole_cap(&self) -> Result<(), SpectralError> {
        for key in self.terms.keys() {
            for j in 1..self.n {
                for i in 0..j {
                    let k = key.poles[pair(i, j)] as u32;
                    if k > POLE_CAP {
                        return Err(SpectralError::PoleCapExceeded {
                            i,
                            j,
                            order: k,
                            cap: POLE_CAP,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Normal form; see the module docs.
    pub fn canonicalize(&self) -> Correlator {
        let mut groups: BTreeMap<u32, Vec<(&TermKey, &MultiPoly)>> = BTreeMap::new();
        for (k, p) in &self.terms {
            groups.entry(k.parity_mask()).or_default().push((k, p));
        }
        let mut out = Correlator::zero(self.n);
        out.tag = self.tag;
        let mut cache = FactorCache::default();
        for (_, members) in groups {
            let (key, num) = combine_group(self.n, &members, &mut cache);
            let (key, num) = cancel_factors(self.n, key, num, &mut cache);
            out.insert(key, num);
        }
        out
    }

    /// Limit `x_j → x_i`, dropping variable `j` and renumbering the rest.
    pub fn merge_diagonal(
        &self,
        i: usize,
        j: usize,
        extra_order: u32,
    ) -> Result<Correlator, SpectralError> {
        assert!(i != j && i < self.n && j < self.n);
        let needed = self.terms.keys().map(|k| k.pole(i, j)).max().unwrap_or(0);
        if extra_order < needed {
            return Err(SpectralError::MergeOrderTooLow {
                given: extra_order,
                needed,
            });
        }
        let mut result = Correlator::zero(self.n);
        let mut residues: Vec<Correlator> =
            (0..=needed).map(|_| Correlator::zero(self.n)).collect();
        for (key, num) in &self.terms {
            let kk = key.pole(i, j);
            let expansion = self.expand_term(key, num, i, j, kk);
            // (x_i - x_j)^{-K} = (-δ)^{-K} when i < j, δ^{-K} otherwise
            let sign = if i < j { sign_pow(kk) } else { Rational::one() };
            for (m, coeffs) in expansion.into_iter().enumerate() {
                let r = kk as usize - m;
                let target = if r == 0 {
                    &mut result
                } else {
                    &mut residues[r]
                };
                for (k2, p) in coeffs {
                    target.insert(k2, p.scale(&sign));
                }
            }
        }
        for (r, res) in residues.iter().enumerate().skip(1) {
            let c = res.canonicalize();
            if !c.is_zero() {
                return Err(SpectralError::DiagonalPoleResidue {
                    i,
                    j,
                    power: r as u32,
                    residue: format!("{c:?}"),
                });
            }
        }
        let map: Vec<usize> = (0..self.n)
            .map(|v| {
                if v < j {
                    v
                } else if v > j {
                    v - 1
                } else {
                    usize::MAX
                }
            })
            .collect();
        let mut dropped = Correlator::zero(self.n - 1);
        for (key, p) in &result.terms {
            let mut nk = TermKey::zero();
            for v in 0..self.n {
                if v != j {
                    nk.sigma[map[v]] = key.sigma[v];
                }
            }
            for b in 1..self.n {
                for a in 0..b {
                    let k = key.poles[pair(a, b)];
                    if k > 0 {
                        debug_assert!(a != j && b != j);
                        nk.poles[pair(map[a], map[b])] = k;
                    }
                }
            }
            let rn = |v: Var| match v {
                Var::X(t) if (t as usize) > j && (t as usize) < self.n => xv(t as usize - 1),
                other => other,
            };
            dropped.insert(nk, p.rename(&rn));
        }
        Ok(dropped.canonicalize())
    }

    /// δ-expansion (δ = x_j − x_i) of every factor of one term except
    /// `(x_i − x_j)^{-K}`, through δ^K.
    fn expand_term(
        &self,
        key: &TermKey,
        num: &MultiPoly,
        i: usize,
        j: usize,
        kk: u32,
    ) -> Vec<Vec<(TermKey, MultiPoly)>> {
        let m_max = kk as usize;
        let mut base = *key;
        base.sigma[j] = 0;
        for c in 0..self.n {
            if c != j {
                if c < j {
                    base.poles[pair(c, j)] = 0;
                } else {
                    base.poles[pair(j, c)] = 0;
                }
            }
        }
        let xi = xv(i);
        let xj = xv(j);

        // numerator: x_j^e -> (x_i + δ)^e
        let cj = num.coeffs_in(xj);
        let mut acc: Vec<Vec<(TermKey, MultiPoly)>> = vec![Vec::new(); m_max + 1];
        for (m, slot) in acc.iter_mut().enumerate() {
            let mut p = MultiPoly::zero();
            for (e, c) in cj.iter().enumerate() {
                if e < m || c.is_zero() {
                    continue;
                }
                let b = crate::arith::rational::binomial_int(e as i64, m as i64);
                p = &p + &c.mul_var(xi, (e - m) as u16).scale(&b);
            }
            if !p.is_zero() {
                slot.push((base, p));
            }
        }

        let mut factors: Vec<Vec<Vec<(TermKey, MultiPoly)>>> = Vec::new();
        let sj = key.sigma[j] as i64;
        if sj != 0 {
            // y_j^{-σ} = y_i^{-σ} Σ_t C(-σ/2, t) (2 x_i δ + δ²)^t y_i^{-2t}
            let half = Rational::new(-sj, 2);
            let mut f = vec![Vec::new(); m_max + 1];
            for (m, slot) in f.iter_mut().enumerate() {
                for t in m.div_ceil(2)..=m {
                    let c = Rational::binomial(&half, t as u32)
                        * crate::arith::rational::binomial_int(t as i64, (m - t) as i64)
                        * Rational::from_int(2).pow((2 * t - m) as i32);
                    if c.is_zero() {
                        continue;
                    }
                    let mut k = TermKey::zero();
                    k.sigma[i] = (sj + 2 * t as i64) as i16;
                    slot.push((k, MultiPoly::var_pow(xi, (2 * t - m) as u16).scale(&c)));
                }
            }
            factors.push(f);
        }
        for c in 0..self.n {
            if c == i || c == j {
                continue;
            }
            let k = key.pole(j, c);
            if k == 0 {
                continue;
            }
            let mut f = vec![Vec::new(); m_max + 1];
            for (m, slot) in f.iter_mut().enumerate() {
                let mut coef = Rational::binomial(&Rational::from_int(-(k as i64)), m as u32);
                // (x_c - x_j) = (x_c - x_i) - δ contributes (-1)^m
                if c < j {
                    coef = coef * sign_pow(m as u32);
                }
                // expansion is in powers of (x_i - x_c) if j < c, else (x_c - x_i)
                let in_i_minus_c = j < c;
                let stored_i_minus_c = i < c;
                if in_i_minus_c != stored_i_minus_c {
                    coef = coef * sign_pow(k + m as u32);
                }
                let mut key2 = TermKey::zero();
                let (a, b) = if i < c { (i, c) } else { (c, i) };
                key2.poles[pair(a, b)] = (k as usize + m) as u8;
                slot.push((key2, MultiPoly::constant(coef)));
            }
            factors.push(f);
        }
        for f in factors {
            let mut next: Vec<HashMap<TermKey, MultiPoly>> = vec![HashMap::new(); m_max + 1];
            for (ma, ta) in acc.iter().enumerate() {
                for (mb, tb) in f.iter().enumerate() {
                    if ma + mb > m_max {
                        break;
                    }
                    for (ka, pa) in ta {
                        for (kb, pb) in tb {
                            let e = next[ma + mb].entry(ka.add(kb)).or_default();
                            *e = &*e + &(pa * pb);
                        }
                    }
                }
            }
            acc = next
                .into_iter()
                .map(|h| h.into_iter().filter(|(_, p)| !p.is_zero()).collect())
                .collect();
        }
        acc
    }

    /// Floating evaluation at real points `x_i > 2√g` on the branch `y_i > 0`.
    pub fn eval_f64(&self, xs: &[f64], gv: f64, hv: f64) -> f64 {
        let mut vals = [0.0; NVARS];
        for (i, &v) in xs.iter().enumerate() {
            vals[i] = v;
        }
        vals[Var::G.index()] = gv;
        vals[Var::H.index()] = hv;
        let ys: Vec<f64> = xs.iter().map(|&v| (v * v - 4.0 * gv).sqrt()).collect();
        self.terms
            .iter()
            .map(|(k, p)| {
                let mut t = p.eval_f64(&vals);
                for i in 0..self.n {
                    t *= ys[i].powi(-(k.sigma[i] as i32));
                }
                for b in 1..self.n {
                    for a in 0..b {
                        let e = k.poles[pair(a, b)] as i32;
                        if e > 0 {
                            t *= (xs[a] - xs[b]).powi(-e);
                        }
                    }
                }
                t
            })
            .sum()
    }
}

#[derive(Default)]
struct FactorCache {
    y2: HashMap<(usize, u32), MultiPoly>,
    diff: HashMap<(usize, usize, u32), MultiPoly>,
}

impl FactorCache {
    fn y2_pow(&mut self, i: usize, e: u32) -> &MultiPoly {
        self.y2
            .entry((i, e))
            .or_insert_with(|| y_squared(xv(i)).pow(e))
    }

    fn diff_pow(&mut self, i: usize, j: usize, e: u32) -> &MultiPoly {
        self.diff
            .entry((i, j, e))
            .or_insert_with(|| (&MultiPoly::var(xv(i)) - &MultiPoly::var(xv(j))).pow(e))
    }
}

fn combine_group(
    n: usize,
    members: &[(&TermKey, &MultiPoly)],
    cache: &mut FactorCache,
) -> (TermKey, MultiPoly) {
    if members.len() == 1 {
        return (*members[0].0, members[0].1.clone());
    }
    let mut top = *members[0].0;
    for (k, _) in members.iter().skip(1) {
        for i in 0..n {
            top.sigma[i] = top.sigma[i].max(k.sigma[i]);
        }
        for p in 0..NPAIRS {
            top.poles[p] = top.poles[p].max(k.poles[p]);
        }
    }
    let parts: Vec<MultiPoly> = members
        .iter()
        .map(|(k, p)| {
            let mut q = (*p).clone();
            for i in 0..n {
                let d = (top.sigma[i] - k.sigma[i]) as u32 / 2;
                if d > 0 {
                    q = &q * cache.y2_pow(i, d);
                }
            }
            for b in 1..n {
                for a in 0..b {
                    let d = (top.poles[pair(a, b)] - k.poles[pair(a, b)]) as u32;
                    if d > 0 {
                        q = &q * cache.diff_pow(a, b, d);
                    }
                }
            }
            q
        })
        .collect();
    (top, parts.into_iter().sum())
}

fn cancel_factors(
    n: usize,
    mut key: TermKey,
    mut num: MultiPoly,
    cache: &mut FactorCache,
) -> (TermKey, MultiPoly) {
    if num.is_zero() {
        return (key, num);
    }
    let four_g = g().scale(&Rational::from_int(4));
    for i in 0..n {
        let s = key.sigma[i] as i32;
        let floor = sigma_floor(s);
        if s < floor {
            num = &num * cache.y2_pow(i, ((floor - s) / 2) as u32);
            key.sigma[i] = floor as i16;
        }
        while key.sigma[i] as i32 - 2 >= floor {
            let (q, r) = num.div_quadratic(xv(i), &four_g);
            if !r.is_zero() {
                break;
            }
            num = q;
            key.sigma[i] -= 2;
        }
    }
    for b in 1..n {
        for a in 0..b {
            let xb = MultiPoly::var(xv(b));
            while key.poles[pair(a, b)] > 0 {
                let (q, r) = num.div_linear(xv(a), &xb);
                if !r.is_zero() {
                    break;
                }
                num = q;
                key.poles[pair(a, b)] -= 1;
            }
        }
    }
    (key, num)
}

impl fmt::Debug for Correlator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, p)| format!("[{p}] {k:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `W_2^0` in normal form, used by tests and documentation.
pub fn w20_reference() -> Correlator {
    let x0 = MultiPoly::var(X);
    let x1 = MultiPoly::var(Var::X(1));
    let four_g = g().scale(&Rational::from_int(4));
    let mut c = Correlator::zero(2);
    let mut k1 = TermKey::zero();
    k1.sigma = [1, 1, 0, 0, 0, 0, 0, 0];
    k1.poles[pair(0, 1)] = 2;
    c.insert(k1, (&(&x0 * &x1) - &four_g).scale(&Rational::new(1, 2)));
    let mut k2 = TermKey::zero();
    k2.poles[pair(0, 1)] = 2;
    c.insert(k2, MultiPoly::constant(Rational::new(-1, 2)));
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w20_symmetric_under_swap() {
        let w = w20_reference();
        assert_eq!(w.permute(&[1, 0]).canonicalize(), w.canonicalize());
    }

    #[test]
    fn merge_without_pole_is_substitution() {
        let x0 = MultiPoly::var(X);
        let x1 = MultiPoly::var(Var::X(1));
        let mut c = Correlator::zero(2);
        let mut k = TermKey::zero();
        k.sigma = [1, 1, 0, 0, 0, 0, 0, 0];
        c.insert(k, &x0 + &x1);
        let m = c.merge_diagonal(0, 1, 0).unwrap();
        let expect = SpectralExpr::from_raw([(2, x0.scale(&Rational::from_int(2)))]).reduce();
        assert_eq!(m.to_spectral().unwrap(), expect);
    }

    #[test]
    fn merge_detects_residue() {
        let mut c = Correlator::zero(2);
        let mut k = TermKey::zero();
        k.poles[pair(0, 1)] = 1;
        c.insert(k, MultiPoly::one());
        assert!(matches!(
            c.merge_diagonal(0, 1, 2),
            Err(SpectralError::DiagonalPoleResidue { .. })
        ));
    }

    #[test]
    fn merge_difference_quotient() {
        // (x0^3 - x1^3)/(x0 - x1) -> 3 x^2
        let x0 = MultiPoly::var(X);
        let x1 = MultiPoly::var(Var::X(1));
        let mut c = Correlator::zero(2);
        let mut k = TermKey::zero();
        k.poles[pair(0, 1)] = 1;
        c.insert(k, &x0.pow(3) - &x1.pow(3));
        let m = c.merge_diagonal(0, 1, 1).unwrap();
        assert_eq!(
            m.to_spectral().unwrap(),
            SpectralExpr::poly(x0.pow(2).scale(&Rational::from_int(3)))
        );
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let w = w20_reference();
        let d = w.derivative(1);
        let (a, b, gv) = (1.3, 2.1, 0.25);
        let eps = 1e-6;
        let fd =
            (w.eval_f64(&[a, b + eps], gv, 0.0) - w.eval_f64(&[a, b - eps], gv, 0.0)) / (2.0 * eps);
        assert!((d.eval_f64(&[a, b], gv, 0.0) - fd).abs() < 1e-6);
    }
}
