use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::arith::{Mono, MultiPoly, Rational, Var};
use crate::error::ParseError;

/// `m_{2p}` as `Σ c_{a,b} N^a k^b` with `k = κ^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentPoly {
    p: usize,
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl MomentPoly {
    pub fn new(p: usize, coeffs: BTreeMap<(u32, u32), Rational>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MomentPoly { p, coeffs }
    }

    /// From a polynomial in `N` and `k`; other variables must be absent.
    pub fn from_multipoly(p: usize, m: &MultiPoly) -> Self {
        let mut coeffs = BTreeMap::new();
        for (mono, c) in m.terms() {
            let a = mono.exp(Var::N) as u32;
            let b = mono.exp(Var::K) as u32;
            assert_eq!(
                mono.degree(),
                a + b,
                "moment polynomial may only involve N and k"
            );
            coeffs.insert((a, b), c.clone());
        }
        MomentPoly::new(p, coeffs)
    }

    pub fn to_multipoly(&self) -> MultiPoly {
        MultiPoly::from_terms(self.coeffs.iter().map(|(&(a, b), c)| {
            (
                Mono::from_pairs(&[(Var::N, a as u16), (Var::K, b as u16)]),
                c.clone(),
            )
        }))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, deg_n: u32, deg_k: u32) -> Rational {
        self.coeffs
            .get(&(deg_n, deg_k))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn degree_n(&self) -> Option<u32> {
        self.coeffs.keys().map(|k| k.0).max()
    }

    /// Coefficient of `N^a` as a dense polynomial in `k`, lowest power first.
    pub fn n_coefficient(&self, a: u32) -> Vec<Rational> {
        let top = self.coeffs.keys().filter(|k| k.0 == a).map(|k| k.1).max();
        match top {
            None => Vec::new(),
            Some(t) => (0..=t).map(|b| self.coeff(a, b)).collect(),
        }
    }

    /// Value at rational `N` and `κ`.
    pub fn eval(&self, n: &Rational, kappa: &Rational) -> Rational {
        let k = kappa.recip();
        self.coeffs
            .iter()
            .map(|(&(a, b), c)| c * &(&n.pow(a as i32) * &k.pow(b as i32)))
            .sum()
    }

    /// Coefficients in `N` (lowest first) at a fixed `κ`.
    pub fn specialize_kappa(&self, kappa: &Rational) -> Vec<Rational> {
        let k = kappa.recip();
        let top = self.degree_n().unwrap_or(0) as usize;
        let mut out = vec![Rational::zero(); top + 1];
        for (&(a, b), c) in &self.coeffs {
            out[a as usize] += &(c * &k.pow(b as i32));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": "gbe/1",
            "kind": "moment",
            "p": self.p,
            "coeffs": self.coeffs.iter().map(|(&(a, b), c)| json!([a, b, c.to_string()])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ParseError> {
        if v.get("schema").and_then(Value::as_str) != Some("gbe/1") {
            return Err(ParseError::Schema(
                v.get("schema").map(|s| s.to_string()).unwrap_or_default(),
            ));
        }
        let bad = || ParseError::Json("expected {p, coeffs: [[degN, degK, \"num/den\"]]}".into());
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(bad)? as usize;
        let mut coeffs = BTreeMap::new();
        for row in v.get("coeffs").and_then(Value::as_array).ok_or_else(bad)? {
            let a = row.get(0).and_then(Value::as_u64).ok_or_else(bad)? as u32;
            let b = row.get(1).and_then(Value::as_u64).ok_or_else(bad)? as u32;
            let c: Rational = row
                .get(2)
                .and_then(Value::as_str)
                .ok_or_else(bad)?
                .parse()?;
            coeffs.insert((a, b), c);
        }
        Ok(MomentPoly::new(p, coeffs))
    }

    /// One display line `m_{2p} = …`, grouped by powers of `N`.
    pub fn to_latex(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let top = self.degree_n().unwrap_or(0);
        for a in (0..=top).rev() {
            let poly = self.n_coefficient(a);
            if poly.iter().all(|c| c.is_zero()) {
                continue;
            }
            let npow = match a {
                0 => String::new(),
                1 => "N".to_string(),
                _ => format!("N^{{{a}}}"),
            };
            let nonzero: Vec<(usize, &Rational)> = poly
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let part = if nonzero.len() == 1 && nonzero[0].0 == 0 {
                format!("{}{}", latex_rational(nonzero[0].1), spaced(&npow))
            } else {
                // a shared magnitude is pulled out, as in 22(-1+κ^{-1})
                let common = nonzero[0].1.abs();
                let common = if nonzero.iter().all(|(_, c)| c.abs() == common) {
                    common
                } else {
                    Rational::one()
                };
                let inner: Vec<String> = nonzero
                    .iter()
                    .enumerate()
                    .map(|(i, (b, c))| {
                        let c = *c / &common;
                        let kp = match b {
                            0 => String::new(),
                            1 => "\\kappa^{-1}".to_string(),
                            _ => format!("\\kappa^{{-{b}}}"),
                        };
                        let mag = c.abs();
                        let body = if mag.is_one() && *b != 0 {
                            kp
                        } else {
                            format!("{}{}", latex_rational(&mag), kp)
                        };
                        let sign = if c.is_negative() {
                            "-"
                        } else if i == 0 {
                            ""
                        } else {
                            "+"
                        };
                        format!("{sign}{body}")
                    })
                    .collect();
                let lead = if common.is_one() {
                    String::new()
                } else {
                    format!("{} ", latex_rational(&common))
                };
                format!("{lead}{npow}\\left({}\\right)", inner.join(""))
            };
            parts.push(part);
        }
        let mut s = format!("m_{{{}}} = ", 2 * self.p);
        for (i, part) in parts.iter().enumerate() {
            if i > 0 {
                s.push('+');
            }
            s.push_str(part);
        }
        if parts.is_empty() {
            s.push('0');
        }
        s
    }
}

fn spaced(s: &str) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!(" {s}")
    }
}

fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().magnitude(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m4() -> MomentPoly {
        let mut c = BTreeMap::new();
        for &(a, b, v) in &[
            (3, 0, 2),
            (2, 0, -5),
            (2, 1, 5),
            (1, 0, 3),
            (1, 1, -5),
            (1, 2, 3),
        ] {
            c.insert((a, b), Rational::from_int(v));
        }
        MomentPoly::new(2, c)
    }

    #[test]
    fn json_round_trip() {
        let m = m4();
        assert_eq!(MomentPoly::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn latex_layout() {
        assert_eq!(
            m4().to_latex(),
            "m_{4} = 2 N^{3}+5 N^{2}\\left(-1+\\kappa^{-1}\\right)+N\\left(3-5\\kappa^{-1}+3\\kappa^{-2}\\right)"
        );
    }

    #[test]
    fn gue_value() {
        // 2N³ + N at κ = 1
        let v = m4().eval(&Rational::from_int(3), &Rational::one());
        assert_eq!(v, Rational::from_int(57));
    }
}
