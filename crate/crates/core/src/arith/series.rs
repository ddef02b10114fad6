//! Truncated Laurent series with exact coefficients.
//!
//! A series `Σ_{e=val}^{order-1} c_e t^e + O(t^order)` over a coefficient
//! ring. The `order` field is the first exponent whose coefficient is not
//! known; every operation propagates it conservatively.

use std::fmt;

use super::poly::MultiPoly;
use super::rational::Rational;
use crate::error::SeriesError;

/// Coefficient rings usable inside a [`TruncatedSeries`].
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    /// Multiplicative inverse when it exists inside the ring.
    fn inverse(&self) -> Option<Self>;
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Coeff for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Rational) -> Self {
        MultiPoly::scale(self, c)
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_constant() && !self.is_zero() {
            Some(MultiPoly::constant(self.constant_term().recip()))
        } else {
            None
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SeriesVar {
    /// A generic small parameter `t`.
    T,
    /// `1/x`, for expansions at `x = ∞`.
    InvX,
    /// `1/N`, for large-N expansions.
    InvN,
}

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<C: Coeff> {
    pub var: SeriesVar,
    val: i32,
    coeffs: Vec<C>,
    order: i32,
}

impl<C: Coeff> TruncatedSeries<C> {
    /// Series with coefficients `coeffs[i]` at exponent `val + i`, known up to `order`.
    pub fn new(var: SeriesVar, val: i32, mut coeffs: Vec<C>, order: i32) -> Self {
        assert!(order >= val, "truncation order below valuation");
        coeffs.resize((order - val) as usize, C::zero());
        TruncatedSeries {
            var,
            val,
            coeffs,
            order,
        }
    }

    pub fn zero(var: SeriesVar, order: i32) -> Self {
        Self::new(var, order, Vec::new(), order)
    }

    pub fn constant(var: SeriesVar, c: C, order: i32) -> Self {
        Self::new(var, 0, vec![c], order)
    }

    /// `1/(1 − t)` to order `order` (exclusive).
    pub fn geometric(var: SeriesVar, order: i32) -> Self {
        Self::new(var, 0, vec![C::one(); order.max(0) as usize], order.max(0))
    }

    pub fn val(&self) -> i32 {
        self.val
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coeff(&self, e: i32) -> C {
        assert!(
            e < self.order,
            "coefficient t^{e} beyond truncation order {}",
            self.order
        );
        if e < self.val {
            C::zero()
        } else {
            self.coeffs[(e - self.val) as usize].clone()
        }
    }

    /// Known exponents paired with coefficients, skipping zeros.
    pub fn nonzero_terms(&self) -> Vec<(i32, C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.val + i as i32, c.clone()))
            .collect()
    }

    /// Lowest exponent with a nonzero known coefficient.
    pub fn leading_exponent(&self) -> Option<i32> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.val + i as i32)
    }

    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        let val = self.val.min(order);
        let coeffs = (val..order).map(|e| self.coeff(e)).collect();
        Self::new(self.var, val, coeffs, order)
    }

    fn check_var(&self, other: &Self) {
        assert_eq!(self.var, other.var, "series variables differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_var(other);
        let val = self.val.min(other.val);
        let order = self.order.min(other.order);
        let val = val.min(order);
        let coeffs = (val..order)
            .map(|e| self.coeff(e).add(&other.coeff(e)))
            .collect();
        Self::new(self.var, val, coeffs, order)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.scale(c)).collect();
        Self::new(self.var, self.val, coeffs, self.order)
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect();
        Self::new(self.var, self.val, coeffs, self.order)
    }

    /// Multiplies by `t^s`.
    pub fn shift(&self, s: i32) -> Self {
        Self::new(self.var, self.val + s, self.coeffs.clone(), self.order + s)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_var(other);
        let val = self.val + other.val;
        let order = (self.order + other.val).min(other.order + self.val);
        let n = (order - val).max(0) as usize;
        let mut out = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= n {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(self.var, val, out, order)
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let Some(v) = self.leading_exponent() else {
            return Err(SeriesError::DivisionByZeroSeries);
        };
        let lead = self.coeff(v);
        let inv0 = lead.inverse().ok_or(SeriesError::NonInvertibleLeading)?;
        let m = (self.order - v) as usize;
        let b: Vec<C> = (0..m).map(|i| self.coeff(v + i as i32)).collect();
        let mut out: Vec<C> = Vec::with_capacity(m);
        out.push(inv0.clone());
        for k in 1..m {
            let mut s = C::zero();
            for i in 1..=k {
                if !b[i].is_zero() {
                    s = s.add(&b[i].mul(&out[k - i]));
                }
            }
            out.push(C::zero().sub(&s.mul(&inv0)));
        }
        Ok(Self::new(self.var, -v, out, self.order - 2 * v))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rational::from_int((self.val + i as i32) as i64)))
            .collect();
        Self::new(self.var, self.val - 1, coeffs, self.order - 1)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.var, C::one(), i32::MAX / 4);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero_to_order(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<C: Coeff> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.var {
            SeriesVar::T => "t",
            SeriesVar::InvX => "x^-1",
            SeriesVar::InvN => "N^-1",
        };
        for (e, c) in self.nonzero_terms() {
            write!(f, "({c:?})*{name}^{e} + ")?;
        }
        write!(f, "O({name}^{})", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::{g, Var};

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn geometric_is_inverse_of_one_minus_t() {
        let one_minus_t = TruncatedSeries::new(SeriesVar::T, 0, vec![r(1), r(-1)], 5);
        let inv = one_minus_t.inverse().unwrap();
        assert_eq!(inv, TruncatedSeries::geometric(SeriesVar::T, 5));
    }

    #[test]
    fn derivative_of_square() {
        let t2 = TruncatedSeries::new(SeriesVar::T, 2, vec![r(1)], 6);
        let d = t2.derivative();
        assert_eq!(d.coeff(1), r(2));
        assert_eq!(d.leading_exponent(), Some(1));
        assert_eq!(d.order(), 5);
    }

    #[test]
    fn zero_division_reports() {
        let z: TruncatedSeries<Rational> = TruncatedSeries::zero(SeriesVar::T, 4);
        assert_eq!(z.inverse().unwrap_err(), SeriesError::DivisionByZeroSeries);
    }

    #[test]
    fn polynomial_coefficients_multiply() {
        // (1 + g t)^2 = 1 + 2 g t + g^2 t^2
        let s = TruncatedSeries::new(SeriesVar::T, 0, vec![MultiPoly::one(), g()], 4);
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(1), g().scale(&r(2)));
        assert_eq!(sq.coeff(2), MultiPoly::var_pow(Var::G, 2));
        assert!(sq.coeff(3).is_zero());
    }
}
