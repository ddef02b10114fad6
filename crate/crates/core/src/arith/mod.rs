//! Exact arithmetic: rationals, multivariate polynomials over a fixed
//! alphabet, and truncated series.

pub mod poly;
pub mod rational;
pub mod series;

pub use poly::{Mono, MultiPoly, Var, MAX_X, NVARS, X};
pub use rational::Rational;
pub use series::{Coeff, SeriesVar, TruncatedSeries};
