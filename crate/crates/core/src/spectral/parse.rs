//! Plain-text input for spectral expressions, e.g.
//! `h^2*(-x/y^4 + (x^2+g)/y^5) + g/y^5` or `2 N^3 + 5 N^2 (k - 1)`.
//!
//! Identifiers are `x`, `g`, `h`, `N`, `k` and `y`; juxtaposition
//! multiplies. Division is allowed by nonzero constants times powers of `y`.

use std::str::FromStr;

use crate::arith::{MultiPoly, Rational, Var, X};
use crate::error::ParseError;

use super::SpectralExpr;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(char),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            out.push(Tok::Num(
                lit.parse().map_err(|_| ParseError::Rational(lit.clone()))?,
            ));
        } else if "xghNky".contains(c) {
            out.push(Tok::Ident(c));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ParseError::Json(format!(
                "unexpected character `{c}` in expression"
            )));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

fn err(msg: &str) -> ParseError {
    ParseError::Json(msg.to_string())
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SpectralExpr, ParseError> {
        let mut acc = SpectralExpr::zero();
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SpectralExpr, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                acc = acc.mul(&invert(&self.power()?)?);
            } else if matches!(
                self.peek(),
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))
            ) {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<SpectralExpr, ParseError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Num(r)) if r.is_integer() => {
                r.to_i64().ok_or_else(|| err("exponent too large"))?
            }
            _ => return Err(err("exponent must be an integer")),
        };
        self.pos += 1;
        let mut out = SpectralExpr::one();
        for _ in 0..e {
            out = out.mul(&base);
        }
        if neg {
            out = invert(&out)?;
        }
        Ok(out)
    }

    fn primary(&mut self) -> Result<SpectralExpr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(SpectralExpr::poly(MultiPoly::constant(r)))
            }
            Some(Tok::Ident(c)) => {
                self.pos += 1;
                Ok(match c {
                    'x' => SpectralExpr::poly(MultiPoly::var(X)),
                    'g' => SpectralExpr::poly(MultiPoly::var(Var::G)),
                    'h' => SpectralExpr::poly(MultiPoly::var(Var::H)),
                    'N' => SpectralExpr::poly(MultiPoly::var(Var::N)),
                    'k' => SpectralExpr::poly(MultiPoly::var(Var::K)),
                    _ => SpectralExpr::y(),
                })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(err("missing `)`"));
                }
                Ok(e)
            }
            _ => Err(err("expected a number, identifier or `(`")),
        }
    }
}

/// Inverse of `c · y^{-σ}`; even powers of `y` arrive reduced to `(x² − 4g)^m`.
fn invert(e: &SpectralExpr) -> Result<SpectralExpr, ParseError> {
    let mut it = e.terms().iter();
    let (s, p) = match (it.next(), it.next()) {
        (Some((&s, p)), None) => (s, p.clone()),
        _ => return Err(err("can only divide by a constant times a power of y")),
    };
    let four_g = MultiPoly::var(Var::G).scale(&Rational::from_int(4));
    let mut p = p;
    let mut m = 0;
    while !p.is_constant() {
        let (q, r) = p.div_quadratic(X, &four_g);
        if !r.is_zero() {
            return Err(err("can only divide by a constant times a power of y"));
        }
        p = q;
        m += 1;
    }
    if p.is_zero() {
        return Err(err("division by zero"));
    }
    Ok(SpectralExpr::term(
        MultiPoly::constant(p.constant_term().recip()),
        2 * m - s,
    ))
}

impl FromStr for SpectralExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut p = Parser {
            toks: lex(s)?,
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(err("trailing input"));
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::{g, h, x};

    #[test]
    fn parses_rational_terms() {
        let e: SpectralExpr = "h^2*(-x/y^4 + (x^2+g)/y^5) + g/y^5".parse().unwrap();
        let h2 = h().pow(2);
        let want = SpectralExpr::term(&(-&x()) * &h2, 4)
            .add(&SpectralExpr::term(&(&x().pow(2) + &g()) * &h2, 5))
            .add(&SpectralExpr::term(g(), 5));
        assert_eq!(e, want);
    }

    #[test]
    fn juxtaposition_and_precedence() {
        let a: SpectralExpr = "2 N^3 + 5N^2 (k - 1)".parse().unwrap();
        let b: SpectralExpr = "2*N^3 + 5*N^2*k - 5*N^2".parse().unwrap();
        assert_eq!(a, b);
        let c: SpectralExpr = "-3/4 x".parse().unwrap();
        assert_eq!(c, SpectralExpr::poly(x().scale(&Rational::new(-3, 4))));
    }

    #[test]
    fn rejects_polynomial_division() {
        assert!("1/(x+1)".parse::<SpectralExpr>().is_err());
        assert!("x +".parse::<SpectralExpr>().is_err());
    }
}
