//! The β = 1, 2, 4 cases: moment recurrences, closed-form evaluations,
//! generating functions, resolvent ODE residuals and large-N expansions.

pub mod closed;
pub mod expansion;
pub mod ode;
pub mod recurrence;
pub mod series;

use crate::arith::Rational;

pub use closed::{closed_form_moment, ClosedForm, SqrtPiRational};
pub use expansion::{duality_holds, gse_goe_duality, large_n_moment_expansion};
pub use ode::{eta_coefficients, eta_function, ode_residual, OdeSpec, ResidualReport};
pub use recurrence::{recurrence_moments, recurrence_moments_symbolic};
pub use series::{gue_u_series, harer_zagier, u_ode_check};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EnsembleTag {
    /// β = 1, κ = 1/2.
    Goe,
    /// β = 2, κ = 1.
    Gue,
    /// β = 4, κ = 2.
    Gse,
}

impl EnsembleTag {
    pub const ALL: [EnsembleTag; 3] = [EnsembleTag::Gue, EnsembleTag::Goe, EnsembleTag::Gse];

    pub fn kappa(self) -> Rational {
        match self {
            EnsembleTag::Goe => Rational::new(1, 2),
            EnsembleTag::Gue => Rational::one(),
            EnsembleTag::Gse => Rational::from_int(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EnsembleTag::Goe => "GOE",
            EnsembleTag::Gue => "GUE",
            EnsembleTag::Gse => "GSE",
        }
    }
}

impl std::str::FromStr for EnsembleTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "goe" => Ok(EnsembleTag::Goe),
            "gue" => Ok(EnsembleTag::Gue),
            "gse" => Ok(EnsembleTag::Gse),
            _ => Err(format!("unknown ensemble `{s}` (expected gue, goe or gse)")),
        }
    }
}
