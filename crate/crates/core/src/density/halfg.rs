//! Coefficients in ℚ[h] extended by integer powers of `√g`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::arith::{Mono, MultiPoly, Rational, Var};
use crate::error::ParseError;

/// `Σ c · h^a · g^{s/2}`, keyed by `(a, s)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HalfGPoly {
    terms: BTreeMap<(u16, i32), Rational>,
}

impl HalfGPoly {
    pub fn zero() -> Self {
        HalfGPoly::default()
    }

    /// `c · h^a · g^{s/2}`.
    pub fn term(c: Rational, h_pow: u16, s_pow: i32) -> Self {
        let mut p = HalfGPoly::zero();
        p.add_term(h_pow, s_pow, c);
        p
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, 0, 0)
    }

    /// Embeds a polynomial in `g` and `h`; panics on any other variable.
    pub fn from_multipoly(p: &MultiPoly) -> Self {
        let mut out = HalfGPoly::zero();
        for (m, c) in p.terms() {
            let a = m.exp(Var::H);
            let k = m.exp(Var::G);
            assert_eq!(m.degree(), (a + k) as u32, "only g and h may appear");
            out.add_term(a, 2 * k as i32, c.clone());
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<(u16, i32), Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, h_pow: u16, s_pow: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self
            .terms
            .entry((h_pow, s_pow))
            .or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(h_pow, s_pow));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, s), c) in &other.terms {
            out.add_term(a, s, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = HalfGPoly::zero();
        for (&(a, s), c) in &self.terms {
            for (&(b, t), d) in &other.terms {
                out.add_term(a + b, s + t, c * d);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = HalfGPoly::zero();
        for (&(a, s), d) in &self.terms {
            out.add_term(a, s, c * d);
        }
        out
    }

    /// Multiplies by `g^{s/2}`.
    pub fn shift_s(&self, s: i32) -> Self {
        HalfGPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, t), c)| ((a, t + s), c.clone()))
                .collect(),
        }
    }

    /// The substitution `√g → −√g`.
    pub fn flip_s(&self) -> Self {
        HalfGPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, s), c)| ((a, s), if s.rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Back to ℚ[g, h] when every `√g` power is even and nonnegative.
    pub fn to_multipoly(&self) -> Option<MultiPoly> {
        let mut out = Vec::new();
        for (&(a, s), c) in &self.terms {
            if s < 0 || s % 2 != 0 {
                return None;
            }
            out.push((
                Mono::from_pairs(&[(Var::H, a), (Var::G, (s / 2) as u16)]),
                c.clone(),
            ));
        }
        Some(MultiPoly::from_terms(out))
    }

    /// Exact value at rational `g` and `h`, when no odd power of `√g` is left.
    pub fn eval_rational(&self, g: &Rational, h: &Rational) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (&(a, s), c) in &self.terms {
            if s % 2 != 0 {
                return None;
            }
            acc += c * &(h.pow(a as i32) * g.pow(s / 2));
        }
        Some(acc)
    }

    pub fn eval_f64(&self, g: f64, h: f64) -> f64 {
        let s = g.sqrt();
        self.terms
            .iter()
            .map(|(&(a, t), c)| c.to_f64() * h.powi(a as i32) * s.powi(t))
            .sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(&(a, s), c)| json!([a, s, c.to_string()]))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, ParseError> {
        let bad = || ParseError::Json("expected [[h_pow, sqrt_g_pow, \"num/den\"], ...]".into());
        let mut out = HalfGPoly::zero();
        for row in v.as_array().ok_or_else(bad)? {
            let a = row.get(0).and_then(Value::as_u64).ok_or_else(bad)? as u16;
            let s = row.get(1).and_then(Value::as_i64).ok_or_else(bad)? as i32;
            let c: Rational = row
                .get(2)
                .and_then(Value::as_str)
                .ok_or_else(bad)?
                .parse()?;
            out.add_term(a, s, c);
        }
        Ok(out)
    }

    /// LaTeX with `g^{s/2}` written as in `\frac{5}{512 g^{3/2}}`.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (&(a, s), c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() {
                "-"
            } else if i == 0 {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let hp = match a {
                0 => String::new(),
                1 => "h".into(),
                _ => format!("h^{{{a}}}"),
            };
            let gp = match s {
                0 => String::new(),
                2 => "g".into(),
                s if s % 2 == 0 => format!("g^{{{}}}", s.abs() / 2),
                s => format!("g^{{{}/2}}", s.abs()),
            };
            let (num, den) = (mag.numer().to_string(), mag.denom().to_string());
            let body = if s < 0 {
                format!("\\frac{{{num}}}{{{den} {gp}}}{}", spaced(&hp))
            } else if mag.is_integer() {
                format!("{num}{}{}", spaced(&gp), spaced(&hp))
            } else {
                format!("\\frac{{{num}}}{{{den}}}{}{}", spaced(&gp), spaced(&hp))
            };
            out.push_str(sign);
            out.push_str(&body);
        }
        out
    }
}

fn spaced(s: &str) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!(" {s}")
    }
}

impl fmt::Display for HalfGPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(a, s), c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{}", c.abs())?;
            if a > 0 {
                write!(f, " h^{a}")?;
            }
            if s != 0 {
                if s % 2 == 0 {
                    write!(f, " g^{}", s / 2)?;
                } else {
                    write!(f, " g^({s}/2)")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_and_square() {
        let p = HalfGPoly::term(Rational::new(5, 512), 3, -3);
        assert_eq!(p.flip_s(), p.scale(&Rational::from_int(-1)));
        let sq = p.mul(&p);
        assert_eq!(sq.terms()[&(6, -6)], Rational::new(25, 262144));
        assert!(sq.to_multipoly().is_none());
        let g2 = HalfGPoly::term(Rational::from_int(3), 1, 4);
        assert_eq!(g2.to_multipoly().unwrap().to_text(), "3*g^2*h");
    }

    #[test]
    fn json_round_trip() {
        let p = HalfGPoly::term(Rational::new(-5, 512), 3, -3).add(&HalfGPoly::term(
            Rational::new(13, 1024),
            1,
            -3,
        ));
        assert_eq!(HalfGPoly::from_json(&p.to_json()).unwrap(), p);
        assert_eq!(
            p.to_latex(),
            "-\\frac{5}{512 g^{3/2}} h^{3}+\\frac{13}{1024 g^{3/2}} h"
        );
    }
}
