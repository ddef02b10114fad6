use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational literal `{0}`")]
    Rational(String),
    #[error("malformed JSON document: {0}")]
    Json(String),
    #[error("unsupported schema `{0}`")]
    Schema(String),
    #[error("invalid potential: {0}")]
    Potential(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("division by a series that vanishes to its truncation order")]
    DivisionByZeroSeries,
    #[error("leading coefficient is not invertible in the coefficient ring")]
    NonInvertibleLeading,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("negative power (x{i} - x{j})^-{power} survives the diagonal merge: {residue}")]
    DiagonalPoleResidue {
        i: usize,
        j: usize,
        power: u32,
        residue: String,
    },
    #[error("extra_order {given} is below the pole order {needed} at the merged pair")]
    MergeOrderTooLow { given: u32, needed: u32 },
    #[error("pole order {order} on (x{i} - x{j}) exceeds the cap of {cap}")]
    PoleCapExceeded {
        i: usize,
        j: usize,
        order: u32,
        cap: u32,
    },
    #[error("{0} variables exceed the alphabet")]
    TooManyVariables(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("W_{n}^{l} requested before its dependency W_{dep_n}^{dep_l}")]
    MissingDependency {
        n: usize,
        l: usize,
        dep_n: usize,
        dep_l: usize,
    },
    #[error("(n, l) = (1, 0) is the base case; use solve_base")]
    BaseCase,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("only the Gaussian potential V(x) = x^2/2 is solvable")]
    UnsupportedPotential,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("m_{moment} needs W_1^l up to l = {needed}, only {available} supplied")]
    InsufficientOrder {
        moment: usize,
        needed: usize,
        available: usize,
    },
    #[error("g survives in the assembled coefficient of N^{n_power}: {detail}")]
    GDependence { n_power: i64, detail: String },
    #[error("odd power of sqrt(kappa) survives: h^{h_power} at loop order {l}")]
    HalfKappa { h_power: u16, l: usize },
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("{method} requires {requirement}")]
    ParityUnsupported {
        method: &'static str,
        requirement: &'static str,
    },
    #[error("{method} is not defined for {ensemble}")]
    MethodUnsupported {
        method: &'static str,
        ensemble: &'static str,
    },
    #[error("{0}")]
    Domain(String),
    #[error("sqrt(pi) tags failed to cancel: net power {0}")]
    SqrtPiResidue(i32),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("rational part has a pole away from x = ±2 sqrt(g): {0}")]
    UnreducibleRationalPart(String),
    #[error("delta coefficients at the two edges are not related by parity at order {0}")]
    EdgeParityMismatch(usize),
    #[error("statistic supplies {available} derivatives, {needed} required")]
    InsufficientSmoothness { needed: usize, available: usize },
    #[error(
        "quadrature did not converge within depth {depth}: estimate {estimate}, error {error}"
    )]
    QuadratureNonConvergence {
        depth: usize,
        estimate: f64,
        error: f64,
    },
    #[error("{terms} Taylor terms subtracted, at least n = {min} required")]
    SubtractionOrder { terms: usize, min: usize },
    #[error("value is not rational at the requested parameters: {0}")]
    IrrationalValue(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
