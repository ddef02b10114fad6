//! Smoothed signed densities `ρ̃_l` from the resolvent coefficients, and
//! means of linear statistics against them.
//!
//! `(g/N) ρ̃ = Σ_l (g/(√κ N))^l ρ̃_l`. Bulk terms are non-integrable at the
//! edges for `l ≥ 2` and are read as Hadamard finite parts.

mod hadamard;
mod halfg;
mod smoothed;
mod statistic;

pub use hadamard::{
    adaptive_gk15, hadamard_finite_part, hadamard_finite_part_with, FnHandle, PolyFn, QuadConfig,
    SmoothFn,
};
pub use halfg::HalfGPoly;
pub use smoothed::{density_from_resolvent, polynomial_mean, stieltjes_transform, SmoothedDensity};
pub use statistic::{
    linear_statistic_mean, polynomial_statistic_exact, statistic_order_value, LinearStatistic,
    StatisticSeries,
};
