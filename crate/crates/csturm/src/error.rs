//! Crate-wide error type. Every validated invariant maps to its own variant
//! so that callers (and the CLI) can name exactly what was violated.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // scalar kernels
    #[error("log_gamma requires a positive finite argument, got {0}")]
    LogGammaDomain(f64),
    #[error("Laguerre order must be finite and exceed -1, got {0}")]
    LaguerreOrder(f64),
    #[error("Laguerre argument must be finite and nonnegative, got {0}")]
    LaguerreArgument(f64),
    #[error("derivative order must be 1 or 2, got {0}")]
    DerivativeOrder(u32),

    // quadrature
    #[error("quadrature weight exponent must be finite and exceed -1, got {0}")]
    WeightExponent(f64),
    #[error("quadrature point count {0} outside the supported range")]
    PointCount(usize),
    #[error(
        "tridiagonal eigensolver failed to converge for size {size} within {budget} iterations"
    )]
    EigensolverFailed { size: usize, budget: usize },
    #[error("integrand is not finite at node {node_index} (x = {node})")]
    NonFiniteIntegrand { node_index: usize, node: f64 },
    #[error("moment degree {j_max} exceeds the exactness limit {limit} of this rule")]
    MomentRange { j_max: usize, limit: usize },

    // orbital parameter validation
    #[error("orbital parameter {0} is not finite")]
    NonFiniteParameter(&'static str),
    #[error("nu must satisfy 0 < nu <= 1, got {0}")]
    NuOutOfRange(f64),
    #[error("l* must be nonnegative, got {0}")]
    NegativeLStar(f64),
    #[error("zeta must be positive, got {0}")]
    NonPositiveZeta(f64),
    #[error("degree n* - l* - nu = {0} is not an integer within tolerance")]
    DegreeNotInteger(f64),
    #[error("degree n* - l* - nu = {0} is negative; the polynomial does not terminate")]
    DegreeNegative(f64),
    #[error("degree n* - l* - nu = {0} is too large")]
    DegreeTooLarge(f64),
    #[error("order 2 l* + 2 nu - alpha = {0} must exceed -1 for an integrable weight")]
    OrderNotIntegrable(f64),
    #[error("alpha must be below 3 (dimension N = 4 - alpha above 1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("dimension N must exceed 1, got {0}")]
    DimensionOutOfRange(f64),
    #[error("gamma-function argument {0} is not positive")]
    GammaArgument(f64),
    #[error("radius must be positive and finite, got {0}")]
    NonPositiveRadius(f64),
    #[error("orbitals disagree in shared parameter {0}; overlap is defined at fixed (l*, nu, alpha, zeta)")]
    IncompatibleSpecs(&'static str),
    #[error("family of orbitals is empty")]
    EmptyFamily,
    #[error("quadrature with {m} points is too coarse; need at least {needed} for exactness")]
    QuadratureTooCoarse { m: usize, needed: usize },

    // differential-equation checks
    #[error(
        "this equation form is defined for nu = 1 and integer l*, got nu = {nu}, l* = {l_star}"
    )]
    ClassicalFormRequired { nu: f64, l_star: f64 },
    #[error("grid of radii is empty")]
    EmptyGrid,
    #[error("finite-difference step must be positive and finite, got {0}")]
    DegenerateStep(f64),
    #[error("finite-difference step {h} is too large for grid point r = {r}")]
    StepTooLargeForGrid { h: f64, r: f64 },
    #[error("energy override is only defined for the radial-variable equation forms")]
    EnergyOverrideUnsupported,
}
