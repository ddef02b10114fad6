//! Exact moment polynomials `m_{2p}(N, κ)` of the Gaussian β-ensemble,
//! assembled from the resolvent expansion, and their structural checks.

pub mod assemble;
pub mod checks;
pub mod poly;
pub mod zeros;

pub use assemble::{moment_polynomial, moment_polynomial_from, ResolventCoefficients};
pub use checks::{
    check_duality, check_structure, gamma_ratio, subleading_closed_form, StructureReport,
};
pub use poly::MomentPoly;
pub use zeros::{unit_circle_zeros, ZeroReport};
