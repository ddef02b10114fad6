//! One-variable elements `Σ_σ P_σ(x) y^{-σ}` with `y² = x² − 4g`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::arith::poly::{g, x};
use crate::arith::series::{Coeff, SeriesVar, TruncatedSeries};
use crate::arith::{Mono, MultiPoly, Rational, Var, X};
use crate::error::ParseError;

/// `x² − 4g`, i.e. `y²`.
pub fn y_squared(v: Var) -> MultiPoly {
    &MultiPoly::var_pow(v, 2) - &g().scale(&Rational::from_int(4))
}

/// Lowest stored σ for a parity class: 0 for even, −1 for odd.
pub fn sigma_floor(sigma: i32) -> i32 {
    if sigma.rem_euclid(2) == 0 {
        0
    } else {
        -1
    }
}

/// Reduces `num · y^{-sigma}` (with `y² = v² − 4g`) to the normal form of
/// its parity class: σ is lowered while the numerator is divisible by
/// `v² − 4g`, and raised to the class floor if it starts below it.
pub fn reduce_in(v: Var, mut num: MultiPoly, mut sigma: i32) -> (MultiPoly, i32) {
    if num.is_zero() {
        return (num, sigma_floor(sigma));
    }
    let floor = sigma_floor(sigma);
    if sigma < floor {
        let lift = ((floor - sigma) / 2) as u32;
        num = &num * &y_squared(v).pow(lift);
        sigma = floor;
    }
    let four_g = g().scale(&Rational::from_int(4));
    while sigma - 2 >= floor {
        let (q, r) = num.div_quadratic(v, &four_g);
        if !r.is_zero() {
            break;
        }
        num = q;
        sigma -= 2;
    }
    (num, sigma)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SpectralExpr {
    terms: BTreeMap<i32, MultiPoly>,
}

impl SpectralExpr {
    pub fn zero() -> Self {
        SpectralExpr::default()
    }

    /// `num · y^{-sigma}`, reduced.
    pub fn term(num: MultiPoly, sigma: i32) -> Self {
        let mut t = BTreeMap::new();
        if !num.is_zero() {
            t.insert(sigma, num);
        }
        SpectralExpr { terms: t }.reduce()
    }

    pub fn poly(num: MultiPoly) -> Self {
        Self::term(num, 0)
    }

    pub fn one() -> Self {
        Self::poly(MultiPoly::one())
    }

    /// `y` itself.
    pub fn y() -> Self {
        Self::term(MultiPoly::one(), -1)
    }

    /// Builds from raw `(σ, numerator)` pairs without reducing.
    pub fn from_raw<I: IntoIterator<Item = (i32, MultiPoly)>>(iter: I) -> Self {
        let mut terms: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        for (s, p) in iter {
            let e = terms.entry(s).or_default();
            *e = &*e + &p;
        }
        terms.retain(|_, p| !p.is_zero());
        SpectralExpr { terms }
    }

    pub fn terms(&self) -> &BTreeMap<i32, MultiPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Normal form: one representative per parity class, minimal σ.
    pub fn reduce(&self) -> Self {
        let mut classes: [Option<(i32, MultiPoly)>; 2] = [None, None];
        for (&s, p) in &self.terms {
            let c = s.rem_euclid(2) as usize;
            classes[c] = Some(match classes[c].take() {
                None => (s, p.clone()),
                Some((s0, p0)) => {
                    let top = s0.max(s);
                    let a = &p0 * &y_squared(X).pow(((top - s0) / 2) as u32);
                    let b = p * &y_squared(X).pow(((top - s) / 2) as u32);
                    (top, &a + &b)
                }
            });
        }
        let mut terms = BTreeMap::new();
        for (s, p) in classes.into_iter().flatten() {
            let (p, s) = reduce_in(X, p, s);
            if !p.is_zero() {
                terms.insert(s, p);
            }
        }
        SpectralExpr { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut raw = self.terms.clone();
        for (s, p) in &other.terms {
            let e = raw.entry(*s).or_default();
            *e = &*e + p;
        }
        SpectralExpr { terms: raw }.reduce()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SpectralExpr {
            terms: self.terms.iter().map(|(s, p)| (*s, -p)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SpectralExpr {
            terms: self.terms.iter().map(|(s, p)| (*s, p.scale(c))).collect(),
        }
    }

    pub fn mul_poly(&self, q: &MultiPoly) -> Self {
        Self::from_raw(self.terms.iter().map(|(s, p)| (*s, p * q))).reduce()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut raw: Vec<(i32, MultiPoly)> = Vec::new();
        for (sa, pa) in &self.terms {
            for (sb, pb) in &other.terms {
                raw.push((sa + sb, pa * pb));
            }
        }
        Self::from_raw(raw).reduce()
    }

    /// d/dx, using `d/dx y^{-σ} = −σ x y^{-σ-2}`.
    pub fn derivative(&self) -> Self {
        let mut raw: Vec<(i32, MultiPoly)> = Vec::new();
        for (s, p) in &self.terms {
            raw.push((*s, p.derivative(X)));
            if *s != 0 {
                raw.push((s + 2, (p * &x()).scale(&Rational::from_int(-(*s as i64)))));
            }
        }
        Self::from_raw(raw).reduce()
    }

    pub fn divide_by_y(&self) -> Self {
        Self::from_raw(self.terms.iter().map(|(s, p)| (s + 1, p.clone()))).reduce()
    }

    /// Applies `f` to every numerator (e.g. an `h` substitution).
    pub fn map_numerators(&self, f: &dyn Fn(&MultiPoly) -> MultiPoly) -> Self {
        Self::from_raw(self.terms.iter().map(|(s, p)| (*s, f(p)))).reduce()
    }

    /// Expansion in `u = 1/x` on the branch `y ~ x`, known through `u^order`.
    pub fn series_at_infinity(&self, order: i32) -> TruncatedSeries<MultiPoly> {
        let mut out: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        let minus_4g = g().scale(&Rational::from_int(-4));
        for (&s, p) in &self.terms {
            // y^{-s} = x^{-s} Σ_j C(-s/2, j) (-4g)^j x^{-2j}
            let half = Rational::new(-(s as i64), 2);
            for (m, c) in p.terms() {
                let d = m.exp(X) as i32;
                let rest = MultiPoly::monomial(m.with(X, 0), c.clone());
                let mut j = 0;
                loop {
                    let e = s + 2 * j - d;
                    if e > order {
                        break;
                    }
                    let b = Rational::binomial(&half, j as u32);
                    if !b.is_zero() {
                        let t = &rest * &minus_4g.pow(j as u32).scale(&b);
                        let slot = out.entry(e).or_default();
                        *slot = &*slot + &t;
                    }
                    j += 1;
                }
            }
        }
        let val = out
            .keys()
            .next()
            .copied()
            .unwrap_or(order + 1)
            .min(order + 1);
        let coeffs = (val..=order)
            .map(|e| out.get(&e).cloned().unwrap_or_default())
            .collect();
        TruncatedSeries::new(SeriesVar::InvX, val, coeffs, order + 1)
    }

    /// Floating evaluation at real `x > 2√g` on the branch `y > 0`.
    pub fn eval_f64(&self, xv: f64, gv: f64, hv: f64) -> f64 {
        let y = (xv * xv - 4.0 * gv).sqrt();
        let mut vals = [0.0; crate::arith::NVARS];
        vals[X.index()] = xv;
        vals[Var::G.index()] = gv;
        vals[Var::H.index()] = hv;
        self.terms
            .iter()
            .map(|(s, p)| p.eval_f64(&vals) * y.powi(-s))
            .sum()
    }

    /// Splits each numerator by powers of `h`: `(h-power, σ) -> poly in x, g`.
    pub fn h_blocks(&self) -> BTreeMap<(u16, i32), MultiPoly> {
        let mut out = BTreeMap::new();
        for (s, p) in &self.terms {
            for (d, c) in p.coeffs_in(Var::H).into_iter().enumerate() {
                if !c.is_zero() {
                    out.insert((d as u16, *s), c);
                }
            }
        }
        out
    }

    /// Coefficient ring variables other than `x`, `g`, `h` are rejected by
    /// construction; this checks the invariant.
    pub fn uses_only_xgh(&self) -> bool {
        self.terms.values().all(|p| {
            p.terms().iter().all(|(m, _)| {
                (0..crate::arith::NVARS).all(|i| {
                    let v = Var::from_index(i);
                    m.0[i] == 0 || matches!(v, Var::X(0) | Var::G | Var::H)
                })
            })
        })
    }

    /// Monomial listing `(x-deg, g-deg, h-deg, coeff)` for one σ.
    pub fn coeff_rows(p: &MultiPoly) -> Vec<(u16, u16, u16, Rational)> {
        p.terms()
            .iter()
            .map(|(m, c)| (m.exp(X), m.exp(Var::G), m.exp(Var::H), c.clone()))
            .collect()
    }

    pub fn from_rows(rows: &[(u16, u16, u16, Rational)]) -> MultiPoly {
        MultiPoly::from_terms(rows.iter().map(|(a, b, c, r)| {
            (
                Mono::from_pairs(&[(X, *a), (Var::G, *b), (Var::H, *c)]),
                r.clone(),
            )
        }))
    }
}

impl SpectralExpr {
    /// `{"schema": "gbe/1", "kind": "spectral", "terms": [{"sigma", "coeffs"}]}`
    /// with coefficient rows `[x-deg, g-deg, h-deg, "num/den"]`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(s, p)| {
                let rows: Vec<Value> = Self::coeff_rows(p)
                    .into_iter()
                    .map(|(a, b, c, r)| json!([a, b, c, r.to_string()]))
                    .collect();
                json!({ "sigma": s, "coeffs": rows })
            })
            .collect();
        json!({ "schema": "gbe/1", "kind": "spectral", "terms": terms })
    }

    /// Inverse of [`SpectralExpr::to_json`]; the result is reduced.
    pub fn from_json(v: &Value) -> Result<Self, ParseError> {
        if v.get("schema").and_then(Value::as_str) != Some("gbe/1") {
            return Err(ParseError::Schema(
                v.get("schema").map(|s| s.to_string()).unwrap_or_default(),
            ));
        }
        let bad = || {
            ParseError::Json("expected terms: [{sigma, coeffs: [[x, g, h, \"num/den\"]]}]".into())
        };
        let mut raw = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(bad)? {
            let sigma = t.get("sigma").and_then(Value::as_i64).ok_or_else(bad)? as i32;
            let mut rows = Vec::new();
            for row in t.get("coeffs").and_then(Value::as_array).ok_or_else(bad)? {
                let deg = |i: usize| {
                    row.get(i)
                        .and_then(Value::as_u64)
                        .map(|d| d as u16)
                        .ok_or_else(bad)
                };
                let c: Rational = row
                    .get(3)
                    .and_then(Value::as_str)
                    .ok_or_else(bad)?
                    .parse()?;
                rows.push((deg(0)?, deg(1)?, deg(2)?, c));
            }
            raw.push((sigma, Self::from_rows(&rows)));
        }
        Ok(Self::from_raw(raw).reduce())
    }

    /// Sum of `\frac{P_σ}{y^{σ}}`, lowest σ first.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&s, p)| {
                let num = p.to_latex();
                match s {
                    0 => format!("\\left({num}\\right)"),
                    -1 => format!("\\left({num}\\right) y"),
                    s if s < 0 => format!("\\left({num}\\right) y^{{{}}}", -s),
                    1 => format!("\\frac{{{num}}}{{y}}"),
                    s => format!("\\frac{{{num}}}{{y^{{{s}}}}}"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl Coeff for SpectralExpr {
    fn zero() -> Self {
        SpectralExpr::zero()
    }
    fn one() -> Self {
        SpectralExpr::one()
    }
    fn is_zero(&self) -> bool {
        SpectralExpr::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        SpectralExpr::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        SpectralExpr::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        SpectralExpr::mul(self, other)
    }
    fn scale(&self, c: &Rational) -> Self {
        SpectralExpr::scale(self, c)
    }
    fn inverse(&self) -> Option<Self> {
        let c = self.terms.get(&0)?;
        if self.terms.len() == 1 && c.is_constant() {
            Some(Self::poly(MultiPoly::constant(c.constant_term().recip())))
        } else {
            None
        }
    }
}

impl fmt::Debug for SpectralExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, p)| format!("({})*y^{}", p, -s))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for SpectralExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn y_squared_reduces_to_polynomial() {
        let e = SpectralExpr::from_raw([(-2, MultiPoly::one())]).reduce();
        assert_eq!(e, SpectralExpr::poly(y_squared(X)));
        assert_eq!(e.terms().keys().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn cancels_common_factor() {
        let num = &x().pow(2) - &g().scale(&Rational::from_int(4));
        let e = SpectralExpr::from_raw([(5, num)]).reduce();
        assert_eq!(e, SpectralExpr::from_raw([(3, MultiPoly::one())]));
    }

    #[test]
    fn derivative_of_base_resolvent() {
        // W = (x - y)/2 ; W' = (1 - x/y)/2
        let w = SpectralExpr::from_raw([
            (0, x().scale(&r(1, 2))),
            (-1, MultiPoly::constant(r(-1, 2))),
        ]);
        let d = w.derivative();
        let expect =
            SpectralExpr::from_raw([(0, MultiPoly::constant(r(1, 2))), (1, x().scale(&r(-1, 2)))]);
        assert_eq!(d, expect);
    }

    #[test]
    fn inverse_y_squared() {
        let inv_y = SpectralExpr::one().divide_by_y();
        assert_eq!(inv_y, SpectralExpr::from_raw([(1, MultiPoly::one())]));
        let sq = inv_y.mul(&inv_y);
        assert_eq!(sq.terms().keys().copied().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn json_and_latex() {
        let w: SpectralExpr = "(x - y)/2".parse().unwrap();
        assert_eq!(SpectralExpr::from_json(&w.to_json()).unwrap(), w);
        assert_eq!(
            w.to_latex(),
            "\\left(-\\frac{1}{2}\\right) y + \\left(\\frac{1}{2} x\\right)"
        );
        let bad = json!({"schema": "gbe/2", "terms": []});
        assert!(SpectralExpr::from_json(&bad).is_err());
    }

    #[test]
    fn sqrt_expansion_at_infinity() {
        let s = SpectralExpr::y().series_at_infinity(3);
        assert_eq!(s.coeff(-1), MultiPoly::one());
        assert!(s.coeff(0).is_zero());
        assert_eq!(s.coeff(1), g().scale(&r(-2, 1)));
        assert_eq!(s.coeff(3), g().pow(2).scale(&r(-2, 1)));
    }
}
