//! The Gaussian spectral-curve ring: one-variable expressions in `x`, `y`
//! and multi-variable correlators with inter-variable poles.

pub mod correlator;
pub mod expr;
pub mod parse;
pub mod zform;

pub use correlator::{Correlator, TermKey};
pub use expr::SpectralExpr;
pub use zform::ZCorrelator;
