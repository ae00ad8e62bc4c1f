//! N-dimensional Coulomb–Sturmian radial functions with noninteger quantum
//! numbers: stable evaluation, generalized Gauss–Laguerre quadrature,
//! orthonormality audits, and residual verification of the radial
//! differential equations.
//!
//! The crate is organized around five modules:
//!
//! - [`specfun`] — log-gamma and generalized Laguerre polynomials of real
//!   order, with derivatives and the defining-equation residual.
//! - [`quadrature`] — Gauss–Laguerre rules for the weight `x^a e^{-x}`
//!   with real `a > -1`, built by the Golub–Welsch procedure with
//!   log-scale weights, plus moment-based self-validation.
//! - [`orbitals`] — validated orbital parameter sets, radial evaluation,
//!   normalization, Gram matrices under the weighted inner product, and
//!   the dimension/eigenvalue/energy maps.
//! - [`odecheck`] — the four radial differential operators, applied to
//!   analytically differentiated orbitals, with pointwise residual
//!   reports and finite-difference cross-checks.
//! - [`cli`] — the `csturm` command-line front end.
//!
//! All operations are pure; every public type is an immutable value and is
//! safe to share across threads.

pub mod cli;
pub mod error;
pub mod grid;
pub mod odecheck;
pub mod orbitals;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use odecheck::{EquationId, RadialDerivatives, ResidualReport};
pub use orbitals::{GramReport, OrbitalSpec};
pub use quadrature::QuadratureRule;
pub use specfun::LaguerreParams;
