//! Correlators in Zhukovsky coordinates.
//!
//! With `g = 1`, `x = z + 1/z` and `y = z − 1/z` uniformize the spectral
//! curve, so every `W_n^l` becomes a single rational function in
//! `z_0..z_{n-1}` over ℚ[h]. Denominators are products of the irreducible
//! factors `z_i`, `z_i − 1`, `z_i + 1`, `z_i z_j − 1` and `z_i − z_j`;
//! the normal form keeps one fraction with every common factor cancelled.
//! The coupling is restored afterwards from the weight of `W_n^l`.

use std::collections::BTreeMap;
use std::fmt;

use super::correlator::{pair, NPAIRS};
use super::expr::SpectralExpr;
use crate::arith::poly::MonoMap;
use crate::arith::{Mono, MultiPoly, Rational, Var, MAX_X, NVARS, X};
use crate::error::SpectralError;

fn zv(i: usize) -> Var {
    Var::X(i as u8)
}

fn sign_pow(k: u32) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        Rational::from_int(-1)
    }
}

/// Denominator exponents. `e` may be negative (a monomial numerator factor).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZKey {
    pub e: [i16; MAX_X],
    /// Powers of `z_i − 1`.
    pub a: [u8; MAX_X],
    /// Powers of `z_i + 1`.
    pub b: [u8; MAX_X],
    /// Powers of `z_i z_j − 1`.
    pub p: [u8; NPAIRS],
    /// Powers of `z_i − z_j`, `i < j`.
    pub q: [u8; NPAIRS],
}

impl ZKey {
    pub fn zero() -> Self {
        ZKey {
            e: [0; MAX_X],
            a: [0; MAX_X],
            b: [0; MAX_X],
            p: [0; NPAIRS],
            q: [0; NPAIRS],
        }
    }

    fn add(&self, o: &ZKey) -> ZKey {
        let mut r = *self;
        for i in 0..MAX_X {
            r.e[i] += o.e[i];
            r.a[i] += o.a[i];
            r.b[i] += o.b[i];
        }
        for k in 0..NPAIRS {
            r.p[k] += o.p[k];
            r.q[k] += o.q[k];
        }
        r
    }

    fn lcm(&self, o: &ZKey) -> ZKey {
        let mut r = *self;
        for i in 0..MAX_X {
            r.e[i] = r.e[i].max(o.e[i]);
            r.a[i] = r.a[i].max(o.a[i]);
            r.b[i] = r.b[i].max(o.b[i]);
        }
        for k in 0..NPAIRS {
            r.p[k] = r.p[k].max(o.p[k]);
            r.q[k] = r.q[k].max(o.q[k]);
        }
        r
    }

    pub fn max_pair_order(&self) -> u32 {
        self.p
            .iter()
            .chain(self.q.iter())
            .map(|&v| v as u32)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Debug for ZKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z^-{:?} (z-1)^-{:?} (z+1)^-{:?}", self.e, self.a, self.b)?;
        for j in 1..MAX_X {
            for i in 0..j {
                if self.p[pair(i, j)] > 0 {
                    write!(f, " (z{i}z{j}-1)^-{}", self.p[pair(i, j)])?;
                }
                if self.q[pair(i, j)] > 0 {
                    write!(f, " (z{i}-z{j})^-{}", self.q[pair(i, j)])?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct ZCorrelator {
    n: usize,
    terms: BTreeMap<ZKey, MultiPoly>,
}

impl ZCorrelator {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_X);
        ZCorrelator {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ZKey, MultiPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial_count(&self) -> usize {
        self.terms.values().map(|p| p.len()).sum()
    }

    pub fn insert(&mut self, key: ZKey, p: MultiPoly) {
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

    /// `W_1^0 = (x − y)/2 = 1/z`.
    pub fn base() -> Self {
        let mut c = ZCorrelator::zero(1);
        let mut k = ZKey::zero();
        k.e[0] = 1;
        c.insert(k, MultiPoly::one());
        c
    }

    pub fn add_assign(&mut self, o: &ZCorrelator) {
        assert_eq!(self.n, o.n);
        for (k, p) in &o.terms {
            self.insert(*k, p.clone());
        }
    }

    pub fn sub(&self, o: &ZCorrelator) -> ZCorrelator {
        let mut out = self.clone();
        for (k, p) in &o.terms {
            out.insert(*k, -p);
        }
        out
    }

    pub fn mul_poly(&self, q: &MultiPoly) -> ZCorrelator {
        let mut out = ZCorrelator::zero(self.n);
        for (k, p) in &self.terms {
            out.insert(*k, p * q);
        }
        out
    }

    pub fn mul(&self, o: &ZCorrelator) -> ZCorrelator {
        assert_eq!(self.n, o.n);
        let mut out = ZCorrelator::zero(self.n);
        for (ka, pa) in &self.terms {
            for (kb, pb) in &o.terms {
                out.insert(ka.add(kb), pa * pb);
            }
        }
        out
    }

    pub fn embed(&self, new_n: usize, map: &[usize]) -> ZCorrelator {
        let rename = |v: Var| match v {
            Var::X(i) if (i as usize) < self.n => zv(map[i as usize]),
            other => other,
        };
        let mut out = ZCorrelator::zero(new_n);
        for (key, poly) in &self.terms {
            let mut nk = ZKey::zero();
            let mut sign = 0u32;
            for i in 0..self.n {
                nk.e[map[i]] = key.e[i];
                nk.a[map[i]] = key.a[i];
                nk.b[map[i]] = key.b[i];
            }
            for j in 1..self.n {
                for i in 0..j {
                    let (ni, nj) = (map[i], map[j]);
                    let (lo, hi) = if ni < nj { (ni, nj) } else { (nj, ni) };
                    nk.p[pair(lo, hi)] += key.p[pair(i, j)];
                    let q = key.q[pair(i, j)];
                    nk.q[pair(lo, hi)] += q;
                    if ni > nj {
                        sign += q as u32;
                    }
                }
            }
            out.insert(nk, poly.rename(&rename).scale(&sign_pow(sign)));
        }
        out
    }

    /// Multiplies by `1/y_i = z_i/((z_i − 1)(z_i + 1))`.
    pub fn divide_by_y(&self, i: usize) -> ZCorrelator {
        let mut out = ZCorrelator::zero(self.n);
        for (k, p) in &self.terms {
            let mut nk = *k;
            nk.e[i] -= 1;
            nk.a[i] += 1;
            nk.b[i] += 1;
            out.insert(nk, p.clone());
        }
        out
    }

    /// Multiplies by `1/(x_i − x_j) = z_i z_j / ((z_i − z_j)(z_i z_j − 1))`.
    pub fn divide_by_x_difference(&self, i: usize, j: usize) -> ZCorrelator {
        let (lo, hi, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let mut out = ZCorrelator::zero(self.n);
        for (k, p) in &self.terms {
            let mut nk = *k;
            nk.e[i] -= 1;
            nk.e[j] -= 1;
            nk.p[pair(lo, hi)] += 1;
            nk.q[pair(lo, hi)] += 1;
            out.insert(nk, p.scale(&Rational::from_int(s)));
        }
        out
    }

    /// `∂/∂x_i = z_i² / (z_i² − 1) · ∂/∂z_i`.
    pub fn derivative_x(&self, i: usize) -> ZCorrelator {
        let zi = zv(i);
        let mut out = ZCorrelator::zero(self.n);
        for (key, num) in &self.terms {
            let mut base = *key;
            base.e[i] -= 2;
            base.a[i] += 1;
            base.b[i] += 1;
            out.insert(base, num.derivative(zi));
            let e = key.e[i] as i64;
            if e != 0 {
                let mut k = base;
                k.e[i] += 1;
                out.insert(k, num.scale(&Rational::from_int(-e)));
            }
            if key.a[i] > 0 {
                let mut k = base;
                k.a[i] += 1;
                out.insert(k, num.scale(&Rational::from_int(-(key.a[i] as i64))));
            }
            if key.b[i] > 0 {
                let mut k = base;
                k.b[i] += 1;
                out.insert(k, num.scale(&Rational::from_int(-(key.b[i] as i64))));
            }
            for j in 0..self.n {
                if j == i {
                    continue;
                }
                let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                let p = key.p[pair(lo, hi)];
                if p > 0 {
                    let mut k = base;
                    k.p[pair(lo, hi)] += 1;
                    out.insert(
                        k,
                        num.mul_var(zv(j), 1)
                            .scale(&Rational::from_int(-(p as i64))),
                    );
                }
                let q = key.q[pair(lo, hi)];
                if q > 0 {
                    let mut k = base;
                    k.q[pair(lo, hi)] += 1;
                    let c = if i < j { -(q as i64) } else { q as i64 };
                    out.insert(k, num.scale(&Rational::from_int(c)));
                }
            }
        }
        out
    }

    /// Single reduced fraction.
    pub fn canonicalize(&self) -> ZCorrelator {
        let mut out = ZCorrelator::zero(self.n);
        if self.terms.is_empty() {
            return out;
        }
        let n = self.n;
        let top = self
            .terms
            .keys()
            .skip(1)
            .fold(*self.terms.keys().next().unwrap(), |acc, k| acc.lcm(k));
        let mut parts: Vec<MultiPoly> = Vec::with_capacity(self.terms.len());
        let mut cache: BTreeMap<(u8, usize, usize, u32), MultiPoly> = BTreeMap::new();
        let mut factor = |kind: u8, i: usize, j: usize, e: u32| -> MultiPoly {
            cache
                .entry((kind, i, j, e))
                .or_insert_with(|| {
                    let zi = MultiPoly::var(zv(i));
                    let one = MultiPoly::one();
                    let base = match kind {
                        0 => &zi - &one,
                        1 => &zi + &one,
                        2 => &(&zi * &MultiPoly::var(zv(j))) - &one,
                        _ => &zi - &MultiPoly::var(zv(j)),
                    };
                    base.pow(e)
                })
                .clone()
        };
        for (k, p) in &self.terms {
            let mut mono = Mono::one();
            for i in 0..n {
                mono.0[i] = (top.e[i] - k.e[i]) as u16;
            }
            let mut q = p.mul_mono(&mono, &Rational::one());
            for i in 0..n {
                let da = (top.a[i] - k.a[i]) as u32;
                if da > 0 {
                    q = &q * &factor(0, i, i, da);
                }
                let db = (top.b[i] - k.b[i]) as u32;
                if db > 0 {
                    q = &q * &factor(1, i, i, db);
                }
            }
            for j in 1..n {
                for i in 0..j {
                    let dp = (top.p[pair(i, j)] - k.p[pair(i, j)]) as u32;
                    if dp > 0 {
                        q = &q * &factor(2, i, j, dp);
                    }
                    let dq = (top.q[pair(i, j)] - k.q[pair(i, j)]) as u32;
                    if dq > 0 {
                        q = &q * &factor(3, i, j, dq);
                    }
                }
            }
            parts.push(q);
        }
        let num: MultiPoly = if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            parts.into_iter().sum()
        };
        if num.is_zero() {
            return out;
        }
        let (key, num) = cancel(n, top, num);
        out.insert(key, num);
        out
    }

    /// `x_j → x_i` by substitution `z_j := z_i`; requires no `z_i − z_j` pole.
    pub fn merge_diagonal(&self, i: usize, j: usize) -> Result<ZCorrelator, SpectralError> {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let map: Vec<usize> = (0..self.n)
            .map(|v| {
                let v2 = if v == j { i } else { v };
                if v2 > j {
                    v2 - 1
                } else {
                    v2
                }
            })
            .collect();
        let rename = |v: Var| match v {
            Var::X(t) if (t as usize) < self.n => zv(map[t as usize]),
            other => other,
        };
        let mut out = ZCorrelator::zero(self.n - 1);
        for (key, poly) in &self.terms {
            let qij = key.q[pair(lo, hi)];
            if qij > 0 {
                return Err(SpectralError::DiagonalPoleResidue {
                    i,
                    j,
                    power: qij as u32,
                    residue: format!("{key:?}"),
                });
            }
            let mut nk = ZKey::zero();
            for v in 0..self.n {
                let t = map[v];
                nk.e[t] += key.e[v];
                nk.a[t] += key.a[v];
                nk.b[t] += key.b[v];
            }
            let pij = key.p[pair(lo, hi)];
            nk.a[map[i]] += pij;
            nk.b[map[i]] += pij;
            let mut sign = 0u32;
            for s in 1..self.n {
                for r in 0..s {
                    if (r, s) == (lo, hi) {
                        continue;
                    }
                    let (mr, ms) = (map[r], map[s]);
                    let p = key.p[pair(r, s)];
                    let q = key.q[pair(r, s)];
                    if mr == ms {
                        unreachable!("only the merged pair collapses");
                    }
                    let (a, b) = if mr < ms { (mr, ms) } else { (ms, mr) };
                    nk.p[pair(a, b)] += p;
                    nk.q[pair(a, b)] += q;
                    if mr > ms {
                        sign += q as u32;
                    }
                }
            }
            out.insert(nk, poly.rename(&rename).scale(&sign_pow(sign)));
        }
        Ok(out.canonicalize())
    }

    pub fn max_pair_order(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.max_pair_order())
            .max()
            .unwrap_or(0)
    }

    pub fn has_coincidence_pole(&self) -> bool {
        self.terms.keys().any(|k| k.q.iter().any(|&v| v > 0))
    }

    /// Floating evaluation at `x_i > 2` (g = 1) on the physical sheet `|z_i| > 1`.
    pub fn eval_f64(&self, xs: &[f64], hv: f64) -> f64 {
        let zs: Vec<f64> = xs
            .iter()
            .map(|&x| (x + (x * x - 4.0).sqrt()) / 2.0)
            .collect();
        let mut vals = [0.0; NVARS];
        vals[..zs.len()].copy_from_slice(&zs);
        vals[Var::H.index()] = hv;
        self.terms
            .iter()
            .map(|(k, p)| {
                let mut t = p.eval_f64(&vals);
                for i in 0..self.n {
                    t *= zs[i].powi(-(k.e[i] as i32));
                    t *= (zs[i] - 1.0).powi(-(k.a[i] as i32));
                    t *= (zs[i] + 1.0).powi(-(k.b[i] as i32));
                }
                for j in 1..self.n {
                    for i in 0..j {
                        t *= (zs[i] * zs[j] - 1.0).powi(-(k.p[pair(i, j)] as i32));
                        t *= (zs[i] - zs[j]).powi(-(k.q[pair(i, j)] as i32));
                    }
                }
                t
            })
            .sum()
    }

    /// Converts a one-variable value of weight `weight` (in units where x has
    /// weight 1 and g weight 2) back to `Σ P_σ(x) y^{-σ}` with g restored.
    pub fn to_spectral(&self, weight: i32) -> Option<SpectralExpr> {
        if self.n != 1 {
            return None;
        }
        let mut raw: Vec<(i32, MultiPoly)> = Vec::new();
        for (k, p) in &self.terms {
            // (z−1)^{-a}(z+1)^{-b}: pad to a common exponent m
            let m = k.a[0].max(k.b[0]) as u32;
            let one = MultiPoly::one();
            let z = MultiPoly::var(X);
            let num =
                &(p * &(&z + &one).pow(m - k.b[0] as u32)) * &(&z - &one).pow(m - k.a[0] as u32);
            // (z² − 1)^{-m} = z^{-m} y^{-m}
            let shift = k.e[0] as i32 + m as i32;
            for (mono, c) in num.terms() {
                let d = mono.exp(X) as i32 - shift;
                let rest = mono.with(X, 0);
                for (s, q) in z_power(d) {
                    raw.push((s + m as i32, q.mul_mono(&rest, c)));
                }
            }
        }
        let e = SpectralExpr::from_raw(raw);
        // restore g from the weight: x^a y^{-σ} g^t has weight a − σ + 2t
        let restored = SpectralExpr::from_raw(e.terms().iter().map(|(s, p)| {
            let q = MultiPoly::from_terms(p.terms().iter().map(|(mono, c)| {
                let a = mono.exp(X) as i32;
                let twice_t = weight - a + s;
                assert!(
                    twice_t >= 0 && twice_t % 2 == 0,
                    "weight mismatch restoring g"
                );
                (mono.with(Var::G, (twice_t / 2) as u16), c.clone())
            }));
            (*s, q)
        }));
        Some(restored.reduce())
    }
}

/// `z^d` with `z = (x + y)/2`, `1/z = (x − y)/2` at g = 1, as `(σ, P(x))`
/// pairs meaning `P · y^{-σ}`; `y²` is folded into `x² − 4`.
fn z_power(d: i32) -> Vec<(i32, MultiPoly)> {
    let s = if d >= 0 { 1 } else { -1 };
    let k = d.unsigned_abs();
    // ((x + s·y)/2)^k = 2^{-k} Σ_r C(k, r) x^{k-r} (s y)^r
    let mut even = MultiPoly::zero();
    let mut odd = MultiPoly::zero();
    let y2 = &MultiPoly::var_pow(X, 2) - &MultiPoly::int(4);
    let scale = Rational::new(1, 2).pow(k as i32);
    for r in 0..=k {
        let c = crate::arith::rational::binomial_int(k as i64, r as i64)
            * &scale
            * if r % 2 == 1 && s < 0 {
                Rational::from_int(-1)
            } else {
                Rational::one()
            };
        let t = &MultiPoly::var_pow(X, (k - r) as u16) * &y2.pow(r / 2);
        if r % 2 == 0 {
            even = &even + &t.scale(&c);
        } else {
            odd = &odd + &t.scale(&c);
        }
    }
    vec![(0, even), (-1, odd)]
}

fn cancel(n: usize, mut key: ZKey, mut num: MultiPoly) -> (ZKey, MultiPoly) {
    // monomial content in each z_i
    let mut content = Mono::one();
    for i in 0..n {
        content.0[i] = num.min_degree(zv(i)).unwrap_or(0);
    }
    if !content.is_one() {
        let terms: MonoMap<Rational> = num
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut mm = *m;
                for i in 0..n {
                    mm.0[i] -= content.0[i];
                }
                (mm, c.clone())
            })
            .collect();
        num = MultiPoly::from_map(terms);
        for i in 0..n {
            key.e[i] -= content.0[i] as i16;
        }
    }
    let one = MultiPoly::one();
    let minus_one = MultiPoly::int(-1);
    for i in 0..n {
        while key.a[i] > 0 {
            let (q, r) = num.div_linear(zv(i), &one);
            if !r.is_zero() {
                break;
            }
            num = q;
            key.a[i] -= 1;
        }
        while key.b[i] > 0 {
            let (q, r) = num.div_linear(zv(i), &minus_one);
            if !r.is_zero() {
                break;
            }
            num = q;
            key.b[i] -= 1;
        }
    }
    for j in 1..n {
        for i in 0..j {
            let zj = MultiPoly::var(zv(j));
            while key.q[pair(i, j)] > 0 {
                let (q, r) = num.div_linear(zv(i), &zj);
                if !r.is_zero() {
                    break;
                }
                num = q;
                key.q[pair(i, j)] -= 1;
            }
            while key.p[pair(i, j)] > 0 {
                match div_zz_minus_one(&num, i, j) {
                    Some(q) => {
                        num = q;
                        key.p[pair(i, j)] -= 1;
                    }
                    None => break,
                }
            }
        }
    }
    (key, num)
}

/// Exact division by `z_i z_j − 1`, ascending in powers of `z_i`.
fn div_zz_minus_one(num: &MultiPoly, i: usize, j: usize) -> Option<MultiPoly> {
    let c = num.coeffs_in(zv(i));
    if c.is_empty() {
        return Some(MultiPoly::zero());
    }
    let d = c.len() - 1;
    if d == 0 {
        return None;
    }
    // N = Q (z_j z_i − 1): c_0 = −q_0, c_k = z_j q_{k-1} − q_k, c_d = z_j q_{d-1}
    let mut q: Vec<MultiPoly> = Vec::with_capacity(d);
    q.push(-&c[0]);
    for k in 1..d {
        let next = &q[k - 1].mul_var(zv(j), 1) - &c[k];
        q.push(next);
    }
    if q[d - 1].mul_var(zv(j), 1) != c[d] {
        return None;
    }
    Some(MultiPoly::from_coeffs_in(zv(i), &q))
}

impl fmt::Debug for ZCorrelator {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_converts_to_half_x_minus_y() {
        let w = ZCorrelator::base().to_spectral(1).unwrap();
        let half = Rational::new(1, 2);
        let expect = SpectralExpr::from_raw([
            (0, MultiPoly::var(X).scale(&half)),
            (-1, MultiPoly::constant(-half)),
        ]);
        assert_eq!(w, expect.reduce());
    }

    #[test]
    fn zz_division_round_trip() {
        let z0 = MultiPoly::var(Var::X(0));
        let z1 = MultiPoly::var(Var::X(1));
        let f = &(&z0 * &z1) - &MultiPoly::one();
        let q0 = &(&z0.pow(2) + &z1) + &MultiPoly::int(3);
        assert_eq!(div_zz_minus_one(&(&q0 * &f), 0, 1), Some(q0.clone()));
        assert_eq!(div_zz_minus_one(&(&q0 + &MultiPoly::one()), 0, 1), None);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mut c = ZCorrelator::zero(2);
        let mut k = ZKey::zero();
        k.e = [-2, -2, 0, 0, 0, 0, 0, 0];
        k.a = [1, 1, 0, 0, 0, 0, 0, 0];
        k.b = [1, 1, 0, 0, 0, 0, 0, 0];
        k.p[pair(0, 1)] = 2;
        c.insert(k, MultiPoly::one());
        let d = c.derivative_x(0);
        let eps = 1e-6;
        let fd =
            (c.eval_f64(&[2.5 + eps, 3.1], 0.0) - c.eval_f64(&[2.5 - eps, 3.1], 0.0)) / (2.0 * eps);
        assert!((d.eval_f64(&[2.5, 3.1], 0.0) - fd).abs() < 1e-6);
    }
}
