use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::arith::poly::g;
use crate::arith::rational::{binomial_int, factorial, gamma_half_over_sqrt_pi};
use crate::arith::{Mono, MultiPoly, Rational, Var, X};
use crate::error::{DensityError, ParseError};
use crate::spectral::SpectralExpr;

use super::halfg::HalfGPoly;

/// `4g − x²`.
fn support_quadratic() -> MultiPoly {
    &g().scale(&Rational::from_int(4)) - &MultiPoly::var_pow(X, 2)
}

/// One level `ρ̃_l` of the smoothed density.
///
/// The bulk is `(1/π) · numerator · (4g − x²)^{e/2}` on `(−2√g, 2√g)`, kept
/// with a single odd exponent `e` and a numerator not divisible by
/// `4g − x²`. Boundary terms are `Σ_j c_j ε^{(j)}` with
/// `ε^{(j)} = δ^{(j)}(x − 2√g) + (−1)^j δ^{(j)}(x + 2√g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothedDensity {
    order: usize,
    bulk: Option<(i32, MultiPoly)>,
    delta: BTreeMap<usize, HalfGPoly>,
}

impl SmoothedDensity {
    /// Normalizes any list of bulk terms to the single-exponent form.
    pub fn new<I>(order: usize, bulk: I, delta: BTreeMap<usize, HalfGPoly>) -> Self
    where
        I: IntoIterator<Item = (i32, MultiPoly)>,
    {
        let mut acc: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        for (e, p) in bulk {
            assert!(e % 2 != 0, "bulk exponent must be odd, got {e}");
            let slot = acc.entry(e).or_default();
            *slot = &*slot + &p;
        }
        acc.retain(|_, p| !p.is_zero());
        let bulk = acc.keys().next().copied().map(|e0| {
            let q = support_quadratic();
            let mut num = MultiPoly::zero();
            for (e, p) in &acc {
                num = &num + &(p * &q.pow(((e - e0) / 2) as u32));
            }
            let mut e = e0;
            let four_g = g().scale(&Rational::from_int(4));
            loop {
                let (quo, rem) = num.div_quadratic(X, &four_g);
                if !rem.is_zero() || num.is_zero() {
                    break;
                }
                // num = quo · (x² − 4g) = −quo · (4g − x²)
                num = -&quo;
                e += 2;
            }
            (e, num)
        });
        let bulk = bulk.filter(|(_, p)| !p.is_zero());
        let delta = delta.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        SmoothedDensity { order, bulk, delta }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `(e, numerator)` of the bulk term, if any.
    pub fn bulk(&self) -> Option<(i32, &MultiPoly)> {
        self.bulk.as_ref().map(|(e, p)| (*e, p))
    }

    pub fn delta(&self) -> &BTreeMap<usize, HalfGPoly> {
        &self.delta
    }

    pub fn max_delta_order(&self) -> Option<usize> {
        self.delta.keys().next_back().copied()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": "gbe/1",
            "kind": "density",
            "l": self.order,
            "bulk": self.bulk.iter().map(|(e, p)| json!({
                "exponent": format!("{e}/2"),
                "numerator": p.to_text(),
            })).collect::<Vec<_>>(),
            "delta": self.delta.iter().map(|(j, c)| json!({
                "order": j,
                "coeff": c.to_json(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ParseError> {
        if v.get("schema").and_then(Value::as_str) != Some("gbe/1") {
            return Err(ParseError::Schema(
                v.get("schema").map(|s| s.to_string()).unwrap_or_default(),
            ));
        }
        let bad = |what: &str| ParseError::Json(format!("density document: bad `{what}`"));
        let l = v.get("l").and_then(Value::as_u64).ok_or_else(|| bad("l"))? as usize;
        let mut bulk = Vec::new();
        for b in v
            .get("bulk")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("bulk"))?
        {
            let e = b
                .get("exponent")
                .and_then(Value::as_str)
                .and_then(|s| s.strip_suffix("/2"))
                .and_then(|s| s.parse::<i32>().ok())
                .filter(|e| e % 2 != 0)
                .ok_or_else(|| bad("exponent"))?;
            let text = b
                .get("numerator")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("numerator"))?;
            let num: SpectralExpr = text.parse()?;
            let num = match num.terms().iter().next() {
                None => MultiPoly::zero(),
                Some((0, p)) if num.terms().len() == 1 => p.clone(),
                _ => return Err(bad("numerator")),
            };
            bulk.push((e, num));
        }
        let mut delta = BTreeMap::new();
        for d in v
            .get("delta")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("delta"))?
        {
            let j = d
                .get("order")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("order"))? as usize;
            delta.insert(
                j,
                HalfGPoly::from_json(d.get("coeff").ok_or_else(|| bad("coeff"))?)?,
            );
        }
        Ok(SmoothedDensity::new(l, bulk, delta))
    }

    /// Display in the layout `(1/π)(…)(4g−x²)^{e/2}χ + Σ c_j ε^{(j)}`.
    pub fn to_latex(&self) -> String {
        let mut parts = Vec::new();
        if let Some((e, p)) = &self.bulk {
            parts.push(format!(
                "\\frac{{1}}{{\\pi}}\\left({}\\right)(4g-x^2)^{{{e}/2}}\\,\\chi_{{x \\in (-2\\sqrt{{g}},2\\sqrt{{g}})}}",
                p.to_latex()
            ));
        }
        for (j, c) in &self.delta {
            parts.push(format!(
                "\\left({}\\right)\\epsilon^{{({j})}}_{{(-2\\sqrt{{g}},2\\sqrt{{g}})}}",
                c.to_latex()
            ));
        }
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        };
        format!("\\tilde{{\\rho}}_{{(1),{}}}(x) = {body}", self.order)
    }
}

/// Principal part of `P(x) / (x² − 4g)^m` at `x = 2√g`, as the coefficients
/// `L_k` of `(x − 2√g)^{−k}`, `k = 1..=m`.
fn principal_part(num: &MultiPoly, m: usize) -> Vec<HalfGPoly> {
    // P(2s + t) = Σ_i P_i t^i
    let deg = num.degree(X).unwrap_or(0) as usize;
    let mut p_t = vec![HalfGPoly::zero(); deg + 1];
    for (mono, c) in num.terms() {
        let e = mono.exp(X) as i64;
        let k = mono.exp(Var::G) as i32;
        let a = mono.exp(Var::H);
        assert_eq!(
            mono.degree(),
            (e as u32) + (k as u32) + a as u32,
            "density numerators live in ℚ[x, g, h]"
        );
        for i in 0..=e {
            let coef = c * &(binomial_int(e, i) * Rational::from_int(2).pow((e - i) as i32));
            p_t[i as usize].add_term(a, (e - i) as i32 + 2 * k, coef);
        }
    }
    // (4s + t)^{−m} = Σ_n (−1)^n C(m+n−1, n) 4^{−m−n} s^{−m−n} t^n
    let mi = m as i64;
    let q_t: Vec<HalfGPoly> = (0..m)
        .map(|n| {
            let n = n as i64;
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let c = binomial_int(mi + n - 1, n) * Rational::from_int(sign)
                / Rational::from_int(4).pow((mi + n) as i32);
            HalfGPoly::term(c, 0, -(mi + n) as i32)
        })
        .collect();
    (1..=m)
        .map(|k| {
            let want = m - k;
            let mut acc = HalfGPoly::zero();
            for i in 0..=want.min(deg) {
                acc = acc.add(&p_t[i].mul(&q_t[want - i]));
            }
            acc
        })
        .collect()
}

/// `W_1^l ↦ ρ̃_l`: odd powers of `y` go to the bulk, even ones to
/// delta-derivative terms at `±2√g`; polynomial parts carry no density.
pub fn density_from_resolvent(w: &SpectralExpr, l: usize) -> Result<SmoothedDensity, DensityError> {
    let mut bulk = Vec::new();
    let mut plus: BTreeMap<usize, HalfGPoly> = BTreeMap::new();
    for (&sigma, num) in w.terms() {
        if sigma.rem_euclid(2) == 1 {
            let m = (sigma - 1).div_euclid(2);
            let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
            bulk.push((-sigma, num.scale(&Rational::from_int(sign))));
        } else if sigma > 0 {
            for (k, lk) in principal_part(num, (sigma / 2) as usize)
                .into_iter()
                .enumerate()
            {
                // c/(x−a)^{j+1} ↦ c (−1)^j δ^{(j)}(x−a) / j!
                let j = k;
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let c = lk.scale(&(Rational::from_int(sign) / Rational::from(factorial(j as u32))));
                let slot = plus.entry(j).or_default();
                *slot = slot.add(&c);
            }
        }
    }
    for (&j, c) in &plus {
        // the −2√g edge is the image under √g → −√g and must be (−1)^j times the +2√g one
        let minus = c.flip_s();
        let want = if j % 2 == 0 {
            c.clone()
        } else {
            c.scale(&Rational::from_int(-1))
        };
        if minus != want {
            return Err(DensityError::EdgeParityMismatch(j));
        }
    }
    Ok(SmoothedDensity::new(l, bulk, plus))
}

/// Falling factorial `n (n−1) ⋯ (n−j+1)`.
fn falling(n: i64, j: usize) -> Rational {
    (0..j as i64).map(|i| Rational::from_int(n - i)).product()
}

/// `∫ x^k (1/π) x^a (4g − x²)^{e/2} dx` over the support, as a multiple of
/// `g^{(a + k + e + 1)/2}` read through meromorphic continuation in `e`.
fn bulk_monomial_mean(total: u32, e: i32) -> Rational {
    if total % 2 == 1 {
        return Rational::zero();
    }
    // x = 2√g u: (2√g)^{2q+1+e} B(q + 1/2, e/2 + 1) / π, with e = 2r − 1
    let q = (total / 2) as i64;
    let r = ((e + 1) / 2) as i64;
    if q + r < 0 {
        // 1/Γ(q + r + 1) vanishes
        return Rational::zero();
    }
    Rational::from_int(2).pow(2 * (q + r) as i32)
        * gamma_half_over_sqrt_pi(q)
        * gamma_half_over_sqrt_pi(r)
        / Rational::from(factorial((q + r) as u32))
}

/// `∫ x^k ρ̃_l(x) dx`, exact, with bulk integrals Hadamard-regularized.
pub fn polynomial_mean(d: &SmoothedDensity, k: u32) -> HalfGPoly {
    let mut out = HalfGPoly::zero();
    if let Some((e, num)) = d.bulk() {
        for (mono, c) in num.terms() {
            let a = mono.exp(X) as u32;
            let v = bulk_monomial_mean(a + k, e);
            if v.is_zero() {
                continue;
            }
            let s = (a + k) as i32 + 1 + e + 2 * mono.exp(Var::G) as i32;
            out.add_term(mono.exp(Var::H), s, c * &v);
        }
    }
    if k % 2 == 1 {
        // bulk odd by symmetry; ε^{(j)} pairs also cancel on odd powers
        return HalfGPoly::zero();
    }
    for (&j, c) in d.delta() {
        if j > k as usize {
            continue;
        }
        // (−1)^j [d^j x^k at 2√g + (−1)^j d^j x^k at −2√g] = 2 (−1)^j k!/(k−j)! (2√g)^{k−j}
        let sign = if j % 2 == 0 { 2 } else { -2 };
        let f = falling(k as i64, j)
            * Rational::from_int(sign)
            * Rational::from_int(2).pow((k as usize - j) as i32);
        out = out.add(&c.shift_s((k as usize - j) as i32).scale(&f));
    }
    out
}

/// Stieltjes transform `∫ ρ̃(λ)/(x − λ) dλ` taken term by term: bulk terms
/// through the inverse of the odd-power dictionary, and
/// `δ^{(k)}(λ − a) ↦ (−1)^k k!/(x − a)^{k+1}`.
pub fn stieltjes_transform(d: &SmoothedDensity) -> Result<SpectralExpr, DensityError> {
    let mut out = SpectralExpr::zero();
    if let Some((e, num)) = d.bulk() {
        let sigma = -e;
        let m = (sigma - 1).div_euclid(2);
        let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        out = out.add(&SpectralExpr::term(
            num.scale(&Rational::from_int(sign)),
            sigma,
        ));
    }
    let Some(top) = d.max_delta_order() else {
        return Ok(out);
    };
    let big_m = top + 1;
    // numerator over (x² − 4g)^M, coefficients of x^r in ℚ[h, √g^{±1}]
    let y2 = &MultiPoly::var_pow(X, 2) - &g().scale(&Rational::from_int(4));
    let mut acc: BTreeMap<u16, HalfGPoly> = BTreeMap::new();
    for (&j, c) in d.delta() {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let cj = c.scale(&(Rational::from_int(sign) * Rational::from(factorial(j as u32))));
        // (x + 2s)^{j+1} + (−1)^j (x − 2s)^{j+1}
        let mut pair: BTreeMap<u16, HalfGPoly> = BTreeMap::new();
        for i in 0..=(j + 1) {
            if (i + j) % 2 == 1 {
                continue;
            }
            let coef =
                binomial_int(j as i64 + 1, i as i64) * Rational::from_int(2).pow(i as i32 + 1);
            pair.insert((j + 1 - i) as u16, cj.shift_s(i as i32).scale(&coef));
        }
        let rest = y2.pow((big_m - j - 1) as u32);
        for (mono, rc) in rest.terms() {
            let xr = mono.exp(X);
            let gk = mono.exp(Var::G) as i32;
            let factor = HalfGPoly::term(rc.clone(), 0, 2 * gk);
            for (&xp, hc) in &pair {
                let slot = acc.entry(xp + xr).or_default();
                *slot = slot.add(&hc.mul(&factor));
            }
        }
    }
    let mut num = MultiPoly::zero();
    for (xp, c) in acc {
        let p = c.to_multipoly().ok_or_else(|| {
            DensityError::UnreducibleRationalPart(format!("coefficient of x^{xp}: {c}"))
        })?;
        num = &num + &p.mul_mono(&Mono::var(X, xp), &Rational::one());
    }
    Ok(out.add(&SpectralExpr::term(num, 2 * big_m as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> SpectralExpr {
        s.parse().unwrap()
    }

    #[test]
    fn semicircle_and_first_correction() {
        let d0 = density_from_resolvent(&w("(x - y)/2"), 0).unwrap();
        assert_eq!(d0.bulk().unwrap().0, 1);
        assert_eq!(
            d0.bulk().unwrap().1,
            &MultiPoly::constant(Rational::new(1, 2))
        );
        assert!(d0.delta().is_empty());
        // mass g
        assert_eq!(polynomial_mean(&d0, 0).to_multipoly().unwrap(), g());

        let d1 = density_from_resolvent(&w("h/2 (1/y - x/y^2)"), 1).unwrap();
        assert_eq!(d1.bulk().unwrap().0, -1);
        assert_eq!(d1.delta()[&0], HalfGPoly::term(Rational::new(-1, 4), 1, 0));
        assert!(polynomial_mean(&d1, 0).is_zero());
        // −h g
        assert_eq!(
            polynomial_mean(&d1, 2),
            HalfGPoly::term(Rational::from_int(-1), 1, 2)
        );
    }

    #[test]
    fn beta_continuation() {
        // ∫(4g − x²)^{−3/2}/π is a finite part: zero
        assert!(bulk_monomial_mean(0, -3).is_zero());
        // ∫x²(4g − x²)^{−3/2}/π = B(3/2, −1/2)/π · (2√g)^0 = −1
        assert_eq!(bulk_monomial_mean(2, -3), Rational::from_int(-1));
        // ∫(4g − x²)^{1/2}/π = 2g
        assert_eq!(bulk_monomial_mean(0, 1), Rational::from_int(2));
    }

    #[test]
    fn stieltjes_inverts_the_dictionary() {
        for s in ["h/2 (1/y - x/y^2)", "h^2 (-x/y^4 + (x^2 + g)/y^5) + g/y^5"] {
            let e = w(s);
            let d = density_from_resolvent(&e, 1).unwrap();
            assert_eq!(stieltjes_transform(&d).unwrap(), e);
        }
    }

    #[test]
    fn json_round_trip() {
        let d = density_from_resolvent(&w("h^2 (-x/y^4 + (x^2 + g)/y^5) + g/y^5"), 2).unwrap();
        assert_eq!(SmoothedDensity::from_json(&d.to_json()).unwrap(), d);
    }
}
