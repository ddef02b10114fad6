//! Polynomial potentials `V(λ) = g0 + Σ_k g_k λ^k / k`.
//!
//! Only the Gaussian instance `V = λ²/2` (`g2 = 1`, all other `g_k = 0`
//! for `k ≥ 1`) is handed to the solver; the type exists so callers can
//! state other potentials and get a typed refusal.

use crate::arith::Rational;
use crate::error::{ParseError, SolverError};

#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    pub g0: Rational,
    /// `couplings[k - 1]` is `g_k`.
    pub couplings: Vec<Rational>,
}

impl Potential {
    pub fn gaussian() -> Self {
        Potential {
            g0: Rational::zero(),
            couplings: vec![Rational::zero(), Rational::one()],
        }
    }

    /// Parses `"g0=…, g1=…, g2=…"`; omitted couplings are zero.
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let mut p = Potential {
            g0: Rational::zero(),
            couplings: Vec::new(),
        };
        for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, value) = part.split_once('=').ok_or_else(|| {
                ParseError::Potential(format!("expected g<k>=<value>, got `{part}`"))
            })?;
            let k: usize = name
                .trim()
                .strip_prefix('g')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| ParseError::Potential(format!("bad coupling name `{name}`")))?;
            let v: Rational = value.parse()?;
            if k == 0 {
                p.g0 = v;
            } else {
                if p.couplings.len() < k {
                    p.couplings.resize(k, Rational::zero());
                }
                p.couplings[k - 1] = v;
            }
        }
        while p.couplings.last().is_some_and(|c| c.is_zero()) {
            p.couplings.pop();
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.couplings.len()
    }

    pub fn is_gaussian(&self) -> bool {
        self.couplings.len() == 2 && self.couplings[0].is_zero() && self.couplings[1].is_one()
    }

    pub fn require_gaussian(&self) -> Result<(), SolverError> {
        if self.is_gaussian() {
            Ok(())
        } else {
            Err(SolverError::UnsupportedPotential)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_gaussian() {
        let p = Potential::parse("g0=3, g2=1").unwrap();
        assert!(p.is_gaussian());
        assert_eq!(p.g0, Rational::from_int(3));
        assert_eq!(Potential::parse("g2=1").unwrap(), Potential::gaussian());
    }

    #[test]
    fn quartic_is_refused() {
        let p = Potential::parse("g2=1, g4=1/10").unwrap();
        assert_eq!(p.degree(), 4);
        assert_eq!(p.require_gaussian(), Err(SolverError::UnsupportedPotential));
        assert!(Potential::parse("q2=1").is_err());
    }
}
