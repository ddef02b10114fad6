//! Operations the hierarchy solver needs from a correlator representation.

use crate::arith::poly::{h, x};
use crate::arith::MultiPoly;
use crate::error::SpectralError;
use crate::spectral::{Correlator, SpectralExpr, ZCorrelator};

pub trait LoopRing: Clone + Send + Sync {
    fn zero(n: usize) -> Self;
    /// `W_1^0`.
    fn base() -> Self;
    /// The coordinate `x_0` as an element of the n-variable ring.
    fn x0(n: usize) -> Self;
    fn n(&self) -> usize;
    fn embed(&self, new_n: usize, map: &[usize]) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn add_assign(&mut self, o: &Self);
    fn sub(&self, o: &Self) -> Self;
    fn scale_int(&self, c: i64) -> Self;
    fn mul_h(&self) -> Self;
    /// `W(x_0, x_0, x_2, …)` as a function of one fewer variable.
    fn merge_first_pair(&self) -> Result<Self, SpectralError>;
    fn dx(&self, i: usize) -> Self;
    fn div_x_difference(&self, i: usize, j: usize) -> Self;
    fn div_y(&self, i: usize) -> Self;
    fn canonicalize(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn validate(&self) -> Result<(), SpectralError>;
    fn size(&self) -> usize;
    /// One-variable restriction of `W_1^l` in `x`/`y` form.
    fn to_w1(&self, l: usize) -> Option<SpectralExpr>;
}

impl LoopRing for Correlator {
    fn zero(n: usize) -> Self {
        Correlator::zero(n)
    }
    fn base() -> Self {
        super::solver::solve_base()
    }
    fn x0(n: usize) -> Self {
        Correlator::from_spectral(&SpectralExpr::poly(x())).embed(n, &[0])
    }
    fn n(&self) -> usize {
        Correlator::n(self)
    }
    fn embed(&self, new_n: usize, map: &[usize]) -> Self {
        Correlator::embed(self, new_n, map)
    }
    fn mul(&self, o: &Self) -> Self {
        Correlator::mul(self, o)
    }
    fn add_assign(&mut self, o: &Self) {
        Correlator::add_assign(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Correlator::sub(self, o)
    }
    fn scale_int(&self, c: i64) -> Self {
        self.scale(&c.into())
    }
    fn mul_h(&self) -> Self {
        self.mul_poly(&h())
    }
    fn merge_first_pair(&self) -> Result<Self, SpectralError> {
        self.merge_diagonal(0, 1, self.max_pole_order())
    }
    fn dx(&self, i: usize) -> Self {
        self.derivative(i)
    }
    fn div_x_difference(&self, i: usize, j: usize) -> Self {
        self.mul_pole(i, j, 1)
    }
    fn div_y(&self, i: usize) -> Self {
        self.divide_by_y(i)
    }
    fn canonicalize(&self) -> Self {
        Correlator::canonicalize(self)
    }
    fn is_zero(&self) -> bool {
        Correlator::is_zero(self)
    }
    fn validate(&self) -> Result<(), SpectralError> {
        self.check_pole_cap()
    }
    fn size(&self) -> usize {
        self.terms().values().map(|p| p.len()).sum()
    }
    fn to_w1(&self, _l: usize) -> Option<SpectralExpr> {
        self.to_spectral()
    }
}

impl LoopRing for ZCorrelator {
    fn zero(n: usize) -> Self {
        ZCorrelator::zero(n)
    }
    fn base() -> Self {
        ZCorrelator::base()
    }
    fn x0(n: usize) -> Self {
        // x = (z² + 1)/z
        let z = MultiPoly::var(crate::arith::X);
        ZCorrelator::base()
            .mul_poly(&(&z.pow(2) + &MultiPoly::one()))
            .embed(n, &[0])
    }
    fn n(&self) -> usize {
        ZCorrelator::n(self)
    }
    fn embed(&self, new_n: usize, map: &[usize]) -> Self {
        ZCorrelator::embed(self, new_n, map)
    }
    fn mul(&self, o: &Self) -> Self {
        ZCorrelator::mul(self, o)
    }
    fn add_assign(&mut self, o: &Self) {
        ZCorrelator::add_assign(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ZCorrelator::sub(self, o)
    }
    fn scale_int(&self, c: i64) -> Self {
        self.mul_poly(&MultiPoly::int(c))
    }
    fn mul_h(&self) -> Self {
        self.mul_poly(&h())
    }
    fn merge_first_pair(&self) -> Result<Self, SpectralError> {
        self.merge_diagonal(0, 1)
    }
    fn dx(&self, i: usize) -> Self {
        self.derivative_x(i)
    }
    fn div_x_difference(&self, i: usize, j: usize) -> Self {
        self.divide_by_x_difference(i, j)
    }
    fn div_y(&self, i: usize) -> Self {
        self.divide_by_y(i)
    }
    fn canonicalize(&self) -> Self {
        ZCorrelator::canonicalize(self)
    }
    fn is_zero(&self) -> bool {
        ZCorrelator::is_zero(self)
    }
    fn validate(&self) -> Result<(), SpectralError> {
        // a stored hierarchy member is regular where two points coincide
        if self.has_coincidence_pole() {
            return Err(SpectralError::DiagonalPoleResidue {
                i: 0,
                j: 1,
                power: self.max_pair_order(),
                residue: format!("{self:?}"),
            });
        }
        Ok(())
    }
    fn size(&self) -> usize {
        self.monomial_count()
    }
    fn to_w1(&self, l: usize) -> Option<SpectralExpr> {
        self.to_spectral(1 - 2 * l as i32)
    }
}
