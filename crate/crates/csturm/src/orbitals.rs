//! Radial orbital families: parameter validation, stable evaluation,
//! normalization, the weighted inner product, and the dimension,
//! eigenvalue, and energy maps.
//!
//! A family member is indexed by `(n*, l*, ν, α, ζ)` with `0 < ν ≤ 1` and
//! evaluates to
//!
//! ```text
//! R(r) = N · (2ζr)^{l* + ν - 1} · e^{-ζr} · L^a_k(2ζr),
//! a = 2 l* + 2 ν - α,      k = n* - l* - ν,
//! N = [ (2ζ)^{3-α} Γ(k+1) / Γ(n* + l* + ν + 1 - α) ]^{1/2},
//! ```
//!
//! orthonormal under `∫ R_i R_j r^{2-α} dr` at fixed `(l*, ν, α, ζ)`. The
//! order `a` must exceed -1 for that inner product to converge, and `k`
//! must be a nonnegative integer for the polynomial to terminate. For
//! `ν = 1`, `α = 1`, integer quantum numbers, these are the classical
//! three-dimensional Coulomb–Sturmians; `α = 4 - N` plays the role of a
//! spatial dimension, and noninteger `ν`, `l*` extend the family
//! continuously.
//!
//! Evaluation accumulates the power, exponential, and normalization in log
//! scale, so magnitudes down to (and past) the `f64` underflow threshold
//! are representable through `radial_log`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureRule};
use crate::specfun::{self, LaguerreParams};

/// Tolerance for the integrality check of the polynomial degree.
const DEGREE_TOL: f64 = 1e-9;

/// Validated orbital parameter set with derived degree and order attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitalSpec {
    n_star: f64,
    l_star: f64,
    nu: f64,
    alpha: f64,
    zeta: f64,
    degree: u32,
    order: f64,
}

impl OrbitalSpec {
    /// Validate `(n*, l*, ν, α, ζ)` and derive the polynomial degree
    /// `k = n* - l* - ν` and order `a = 2l* + 2ν - α`. Each violated
    /// invariant maps to its own error.
    pub fn new(n_star: f64, l_star: f64, nu: f64, alpha: f64, zeta: f64) -> Result<Self> {
        for (name, v) in [
            ("n_star", n_star),
            ("l_star", l_star),
            ("nu", nu),
            ("alpha", alpha),
            ("zeta", zeta),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFiniteParameter(name));
            }
        }
        if !(nu > 0.0 && nu <= 1.0) {
            return Err(Error::NuOutOfRange(nu));
        }
        if l_star < 0.0 {
            return Err(Error::NegativeLStar(l_star));
        }
        if zeta <= 0.0 {
            return Err(Error::NonPositiveZeta(zeta));
        }
        let k_real = n_star - l_star - nu;
        let k_round = k_real.round();
        if (k_real - k_round).abs() > DEGREE_TOL {
            return Err(Error::DegreeNotInteger(k_real));
        }
        if k_round < 0.0 {
            return Err(Error::DegreeNegative(k_real));
        }
        if k_round > f64::from(u32::MAX) {
            return Err(Error::DegreeTooLarge(k_real));
        }
        let order = 2.0 * l_star + 2.0 * nu - alpha;
        if order <= -1.0 {
            return Err(Error::OrderNotIntegrable(order));
        }
        if alpha >= 3.0 {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(Self {
            n_star,
            l_star,
            nu,
            alpha,
            zeta,
            degree: k_round as u32,
            order,
        })
    }

    /// As `new`, with the weight parameter given as a dimension `N = 4 - α`.
    pub fn from_dimension(
        n_star: f64,
        l_star: f64,
        nu: f64,
        n_dim: f64,
        zeta: f64,
    ) -> Result<Self> {
        Self::new(n_star, l_star, nu, alpha_from_dimension(n_dim)?, zeta)
    }

    pub fn n_star(&self) -> f64 {
        self.n_star
    }

    pub fn l_star(&self) -> f64 {
        self.l_star
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// Polynomial degree `k = n* - l* - ν` (rounded to the validated integer).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Laguerre order `a = 2l* + 2ν - α`.
    pub fn order(&self) -> f64 {
        self.order
    }

    /// Spatial dimension `N = 4 - α`.
    pub fn dimension(&self) -> f64 {
        4.0 - self.alpha
    }

    /// Parameters of the polynomial factor `L^a_k`.
    pub fn laguerre_params(&self) -> LaguerreParams {
        LaguerreParams::new(self.order, self.degree)
            .expect("validated spec always yields a valid order")
    }

    /// Normalization constant, `[(2ζ)^{3-α} Γ(k+1) / Γ(n*+l*+ν+1-α)]^{1/2}`.
    ///
    /// Fixed so that `∫ R^2 r^{2-α} dr = 1`; at `α = 0` it reduces to the
    /// classical closed form `[(2ζ)^3 Γ(n*-l*-ν+1)/Γ(n*+l*+ν+1)]^{1/2}`.
    pub fn normalization(&self) -> Result<f64> {
        Ok(self.log_normalization()?.exp())
    }

    pub(crate) fn log_normalization(&self) -> Result<f64> {
        // q = n* + l* + ν + 1 - α = k + a + 1 > 0 for any valid spec
        let q = self.n_star + self.l_star + self.nu + 1.0 - self.alpha;
        if q <= 0.0 {
            return Err(Error::GammaArgument(q));
        }
        let lg_k = specfun::log_gamma(f64::from(self.degree) + 1.0)?;
        let lg_q = specfun::log_gamma(q)?;
        Ok(0.5 * ((3.0 - self.alpha) * (2.0 * self.zeta).ln() + lg_k - lg_q))
    }

    /// Radial value as `(sign, log magnitude)`, finite for any `r > 0`
    /// except at polynomial nodes, where the sign is 0 and the log is -∞.
    ///
    /// For `l* + ν < 1` the function diverges as `r → 0+`; it stays square
    /// integrable under the working weight and no special origin handling
    /// is done.
    pub fn radial_log(&self, r: f64) -> Result<(i8, f64)> {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::NonPositiveRadius(r));
        }
        let x = 2.0 * self.zeta * r;
        let poly = specfun::laguerre(self.laguerre_params(), x)?;
        if poly == 0.0 {
            return Ok((0, f64::NEG_INFINITY));
        }
        let b = self.l_star + self.nu - 1.0;
        let log_mag = self.log_normalization()? + b * x.ln() - self.zeta * r + poly.abs().ln();
        Ok((if poly > 0.0 { 1 } else { -1 }, log_mag))
    }

    /// Radial value `R(r) = sign · exp(log magnitude)`.
    pub fn radial(&self, r: f64) -> Result<f64> {
        let (sign, log_mag) = self.radial_log(r)?;
        Ok(f64::from(sign) * log_mag.exp())
    }
}

/// Overlap report for a fixed-(l*, ν, α, ζ) family: the full Gram matrix
/// under the weighted inner product plus its deviation from the identity.
#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub specs: Vec<OrbitalSpec>,
    pub matrix: Vec<Vec<f64>>,
    pub max_offdiag: f64,
    pub max_diag_deviation: f64,
}

/// `⟨R_i, R_j⟩ = ∫_0^∞ R_i R_j r^{2-α} dr` by an M-point generalized
/// Gauss–Laguerre rule in the scaled variable `x = 2ζr`.
///
/// After the substitution the integrand is `x^a e^{-x}` times a polynomial
/// of degree `k_i + k_j`, so `M ≥ k_max + 2` points make the result exact
/// up to rounding; the screening parameter drops out entirely.
pub fn overlap(spec_i: &OrbitalSpec, spec_j: &OrbitalSpec, points: usize) -> Result<f64> {
    check_compatible(spec_i, spec_j)?;
    let needed = spec_i.degree.max(spec_j.degree) as usize + 2;
    if points < needed {
        return Err(Error::QuadratureTooCoarse { m: points, needed });
    }
    let rule = quadrature::gauss_laguerre_rule(spec_i.order, points)?;
    overlap_with_rule(spec_i, spec_j, &rule)
}

fn overlap_with_rule(
    spec_i: &OrbitalSpec,
    spec_j: &OrbitalSpec,
    rule: &QuadratureRule,
) -> Result<f64> {
    let pi = spec_i.laguerre_params();
    let pj = spec_j.laguerre_params();
    let integral = rule.integrate(|x| {
        let li = specfun::laguerre(pi, x).unwrap_or(f64::NAN);
        let lj = specfun::laguerre(pj, x).unwrap_or(f64::NAN);
        li * lj
    })?;
    // N_i N_j / (2ζ)^{3-α} in log scale: the gamma ratios of both
    // normalization constants survive, the power of 2ζ cancels
    let a = spec_i.order;
    let log_pref = 0.5
        * (specfun::log_gamma(f64::from(spec_i.degree) + 1.0)?
            + specfun::log_gamma(f64::from(spec_j.degree) + 1.0)?
            - specfun::log_gamma(f64::from(spec_i.degree) + a + 1.0)?
            - specfun::log_gamma(f64::from(spec_j.degree) + a + 1.0)?);
    Ok(log_pref.exp() * integral)
}

/// Gram matrix of a compatible family, with deviation-from-identity stats.
pub fn gram(family: &[OrbitalSpec], points: usize) -> Result<GramReport> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    for other in &family[1..] {
        check_compatible(first, other)?;
    }
    let k_max = family.iter().map(|s| s.degree).max().unwrap_or(0) as usize;
    if points < k_max + 2 {
        return Err(Error::QuadratureTooCoarse {
            m: points,
            needed: k_max + 2,
        });
    }
    let rule = quadrature::gauss_laguerre_rule(first.order, points)?;
    let n = family.len();
    let mut matrix = vec![vec![0.0_f64; n]; n];
    for i in 0..n {
        for j in i..n {
            let value = overlap_with_rule(&family[i], &family[j], &rule)?;
            matrix[i][j] = value;
            matrix[j][i] = value;
        }
    }
    let mut max_offdiag = 0.0_f64;
    let mut max_diag_deviation = 0.0_f64;
    for (i, row) in matrix.iter().enumerate() {
        max_diag_deviation = max_diag_deviation.max((row[i] - 1.0).abs());
        for &entry in &row[..i] {
            max_offdiag = max_offdiag.max(entry.abs());
        }
    }
    Ok(GramReport {
        specs: family.to_vec(),
        matrix,
        max_offdiag,
        max_diag_deviation,
    })
}

/// The orthonormal ladder at fixed `(l*, ν, α, ζ)`: members have
/// `n* = l* + ν + k` for `k = 0..count`.
pub fn family(
    l_star: f64,
    nu: f64,
    alpha: f64,
    zeta: f64,
    count: usize,
) -> Result<Vec<OrbitalSpec>> {
    (0..count)
        .map(|k| OrbitalSpec::new(l_star + nu + k as f64, l_star, nu, alpha, zeta))
        .collect()
}

fn check_compatible(a: &OrbitalSpec, b: &OrbitalSpec) -> Result<()> {
    if a.l_star != b.l_star {
        return Err(Error::IncompatibleSpecs("l_star"));
    }
    if a.nu != b.nu {
        return Err(Error::IncompatibleSpecs("nu"));
    }
    if a.alpha != b.alpha {
        return Err(Error::IncompatibleSpecs("alpha"));
    }
    if a.zeta != b.zeta {
        return Err(Error::IncompatibleSpecs("zeta"));
    }
    Ok(())
}

/// Weight parameter from spatial dimension, `α = 4 - N` (N > 1).
pub fn alpha_from_dimension(n_dim: f64) -> Result<f64> {
    if !n_dim.is_finite() || n_dim <= 1.0 {
        return Err(Error::DimensionOutOfRange(n_dim));
    }
    Ok(4.0 - n_dim)
}

/// Spatial dimension from weight parameter, `N = 4 - α` (α < 3).
pub fn dimension_from_alpha(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha >= 3.0 {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(4.0 - alpha)
}

/// Effective angular quantum number `l' = l* + ν - 1`.
pub fn effective_l(l_star: f64, nu: f64) -> f64 {
    l_star + nu - 1.0
}

/// Angular eigenvalue `λ = (l* + ν - 1)(l* + ν + N - 3)`, computed in the
/// canonical form `l'(l' + N - 2)` with `l' = l* + ν - 1`.
pub fn angular_eigenvalue(l_star: f64, nu: f64, n_dim: f64) -> Result<f64> {
    if !l_star.is_finite() || l_star < 0.0 {
        return Err(Error::NegativeLStar(l_star));
    }
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::NuOutOfRange(nu));
    }
    if !n_dim.is_finite() || n_dim <= 1.0 {
        return Err(Error::DimensionOutOfRange(n_dim));
    }
    let l_eff = effective_l(l_star, nu);
    Ok(l_eff * (l_eff + (n_dim - 2.0)))
}

/// Sturmian energy at fixed screening, `E = -ζ² / (3 - α)`.
pub fn sturmian_energy(zeta: f64, alpha: f64) -> Result<f64> {
    if !zeta.is_finite() || zeta <= 0.0 {
        return Err(Error::NonPositiveZeta(zeta));
    }
    if !alpha.is_finite() || alpha >= 3.0 {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(-(zeta * zeta) / (3.0 - alpha))
}
