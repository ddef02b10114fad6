//! Monte-Carlo check of the exact moments through the tridiagonal model of
//! the Gaussian β-ensemble.
//!
//! With `d_i ~ N(0, 2)` and `b_i ~ χ_{β(N−i)}`, the symmetric tridiagonal
//! matrix `T/√2` has eigenvalue law `∝ e^{−λ²/2} |Δ|^β`. Scaling by `1/√κ`
//! gives the unscaled weight `e^{−κλ²/2} |Δ|^{2κ}`, and a further `√(g/N)`
//! the starred one with support `(−2√g, 2√g)`.

mod estimate;
mod sample;

pub use estimate::{estimate_and_compare, estimate_with, exact_moments, McConfig, MomentEstimate};
pub use sample::{sample, trace_moments, Convention, TridiagonalSample};
