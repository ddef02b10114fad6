//! Large-N expansion of the Gaussian β-ensemble.
//!
//! The loop equations for `V(x) = x²/2` are solved exactly over
//! ℚ[g, h], with `h = √κ − 1/√κ`. From the resolvent coefficients the crate
//! derives moment polynomials, smoothed signed densities and the classical
//! β = 1, 2, 4 identities, plus a Monte-Carlo harness for cross-checks.

pub mod arith;
pub mod classical;
pub mod density;
pub mod error;
pub mod loops;
pub mod mc;
pub mod moments;
pub mod reference;
pub mod spectral;
