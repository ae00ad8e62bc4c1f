//! Residual verification of the radial differential equations.
//!
//! Four operator forms are implemented. Two act in the scaled variable
//! `x = 2ζr` and are defined for the classical subfamily (`ν = 1`, integer
//! `l*`): `Eq7`, whose coefficient bracket mixes the constant and
//! variable-dependent terms, and `Eq8`, a rewriting of it whose bracket
//! differs algebraically by `(l + 1 - α)/x` — `bracket_discrepancy` exposes
//! that gap in closed form and the residual reports quantify it. Two act in
//! the radius itself: `Eq10`, the collected divergence form for the
//! classical subfamily, and `Eq11`, its extension to noninteger quantum
//! numbers, which every valid orbital must annihilate:
//!
//! ```text
//! [ -1/((3-α) r^{3-α}) d/dr ( r^{3-α} d/dr )
//!   + λ/((3-α) r²) - ζ(2n* + 1 - α)/((3-α) r) - E ] R = 0,
//! λ = (l* + ν - 1)(l* + ν + 1 - α),      E = -ζ²/(3 - α),
//! ```
//!
//! with `λ` reducing to `l (l + 2 - α)` at `ν = 1`. Residuals are formed by
//! substituting analytically differentiated orbitals; a run is "passing"
//! when the pointwise residual is at rounding scale relative to
//! `|R| + |R'| + |R''|`.

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::orbitals::{self, OrbitalSpec};
use crate::specfun;

/// Floor added to the relative-residual scale so nodes do not divide by zero.
const SCALE_EPS: f64 = 1e-300;

/// Tolerance for the integer-l* precondition of the classical forms.
const INTEGER_L_TOL: f64 = 1e-9;

/// Identifies one of the four radial differential operator forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquationId {
    /// x-variable form, constant and variable terms mixed; classical only.
    #[serde(rename = "EQ7")]
    Eq7,
    /// x-variable rewritten form; differs from `Eq7` by `(l+1-α)/x · R`.
    #[serde(rename = "EQ8")]
    Eq8,
    /// Collected divergence form in r; classical only.
    #[serde(rename = "EQ10")]
    Eq10,
    /// Divergence form with the noninteger centrifugal coefficient; the
    /// whole family must satisfy it.
    #[serde(rename = "EQ11")]
    Eq11,
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            EquationId::Eq7 => "EQ7",
            EquationId::Eq8 => "EQ8",
            EquationId::Eq10 => "EQ10",
            EquationId::Eq11 => "EQ11",
        };
        f.write_str(name)
    }
}

impl FromStr for EquationId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "EQ7" => Ok(EquationId::Eq7),
            "EQ8" => Ok(EquationId::Eq8),
            "EQ10" => Ok(EquationId::Eq10),
            "EQ11" => Ok(EquationId::Eq11),
            other => Err(format!(
                "unknown equation id {other:?}; expected one of EQ7, EQ8, EQ10, EQ11"
            )),
        }
    }
}

/// Radial value and its first two analytic derivatives at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialDerivatives {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

/// One grid point of a residual report.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualPoint {
    pub r: f64,
    pub residual: f64,
}

/// Pointwise and aggregate residuals of one operator form applied to one
/// orbital over a radial grid.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub equation: EquationId,
    pub spec: OrbitalSpec,
    pub max_abs: f64,
    /// Largest residual relative to the local `|R| + |R'| + |R''|` scale.
    pub max_rel: f64,
    pub points: Vec<ResidualPoint>,
}

impl ResidualReport {
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.r)
    }

    pub fn residuals(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.residual)
    }
}

/// Analytic `(R, dR/dr, d²R/dr²)` from the product rule on
/// `N x^b e^{-x/2} L^a_k(x)` with `x = 2ζr`, `b = l* + ν - 1`.
pub fn radial_derivatives(spec: &OrbitalSpec, r: f64) -> Result<RadialDerivatives> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::NonPositiveRadius(r));
    }
    let zeta = spec.zeta();
    let x = 2.0 * zeta * r;
    let params = spec.laguerre_params();
    let poly = specfun::laguerre(params, x)?;
    let poly_d1 = specfun::laguerre_deriv(params, x, 1)?;
    let poly_d2 = specfun::laguerre_deriv(params, x, 2)?;
    let b = spec.l_star() + spec.nu() - 1.0;

    let prefactor = (spec.log_normalization()? + b * x.ln() - 0.5 * x).exp();
    let du = (b / x - 0.5) * poly + poly_d1;
    let d2u =
        (b * (b - 1.0) / (x * x) - b / x + 0.25) * poly + (2.0 * b / x - 1.0) * poly_d1 + poly_d2;
    let s = 2.0 * zeta;
    Ok(RadialDerivatives {
        value: prefactor * poly,
        first: s * prefactor * du,
        second: s * s * prefactor * d2u,
    })
}

/// Residual report with the energy fixed by the screening parameter.
pub fn residual(equation: EquationId, spec: &OrbitalSpec, grid: &[f64]) -> Result<ResidualReport> {
    residual_impl(equation, spec, grid, None)
}

/// As `residual`, but with the energy of the r-variable forms replaced by
/// an arbitrary value — the residual then measures how far that energy is
/// from the one the orbital actually solves.
pub fn residual_with_energy(
    equation: EquationId,
    spec: &OrbitalSpec,
    grid: &[f64],
    energy: f64,
) -> Result<ResidualReport> {
    match equation {
        EquationId::Eq10 | EquationId::Eq11 => residual_impl(equation, spec, grid, Some(energy)),
        EquationId::Eq7 | EquationId::Eq8 => Err(Error::EnergyOverrideUnsupported),
    }
}

fn residual_impl(
    equation: EquationId,
    spec: &OrbitalSpec,
    grid: &[f64],
    energy: Option<f64>,
) -> Result<ResidualReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let (n, l) = match equation {
        EquationId::Eq11 => (spec.n_star(), spec.l_star()),
        _ => require_classical(spec)?,
    };
    let alpha = spec.alpha();
    let zeta = spec.zeta();
    let energy = match energy {
        Some(e) => e,
        None => orbitals::sturmian_energy(zeta, alpha)?,
    };

    let mut points = Vec::with_capacity(grid.len());
    let mut max_abs = 0.0_f64;
    let mut max_rel = 0.0_f64;
    for &r in grid {
        let d = radial_derivatives(spec, r)?;
        let (res, scale) = match equation {
            EquationId::Eq7 | EquationId::Eq8 => {
                let x = 2.0 * zeta * r;
                let dx1 = d.first / (2.0 * zeta);
                let dx2 = d.second / (4.0 * zeta * zeta);
                let bracket = match equation {
                    EquationId::Eq7 => eq7_bracket(n, l, alpha, x),
                    _ => eq8_bracket(n, l, alpha, x),
                };
                (
                    x * dx2 + (3.0 - alpha) * dx1 + bracket * d.value,
                    d.value.abs() + dx1.abs() + dx2.abs() + SCALE_EPS,
                )
            }
            EquationId::Eq10 => {
                let centrifugal = l * (l + 2.0 - alpha);
                (
                    collected_residual(&d, r, centrifugal, n, alpha, zeta, energy),
                    d.value.abs() + d.first.abs() + d.second.abs() + SCALE_EPS,
                )
            }
            EquationId::Eq11 => {
                let l_eff = orbitals::effective_l(spec.l_star(), spec.nu());
                let centrifugal = l_eff * (l_eff + 2.0 - alpha);
                (
                    collected_residual(&d, r, centrifugal, n, alpha, zeta, energy),
                    d.value.abs() + d.first.abs() + d.second.abs() + SCALE_EPS,
                )
            }
        };
        max_abs = max_abs.max(res.abs());
        max_rel = max_rel.max(res.abs() / scale);
        points.push(ResidualPoint { r, residual: res });
    }
    Ok(ResidualReport {
        equation,
        spec: *spec,
        max_abs,
        max_rel,
        points,
    })
}

/// Left side of the divergence form at one radius:
/// `-R''/(3-α) - R'/r + [λ/((3-α)r²) - ζ(2n+1-α)/((3-α)r) - E] R`.
fn collected_residual(
    d: &RadialDerivatives,
    r: f64,
    centrifugal: f64,
    n: f64,
    alpha: f64,
    zeta: f64,
    energy: f64,
) -> f64 {
    let s = 3.0 - alpha;
    -d.second / s - d.first / r
        + (centrifugal / (s * r * r) - zeta * (2.0 * n + 1.0 - alpha) / (s * r) - energy) * d.value
}

/// Coefficient of R in the x-variable first form:
/// `n + (1-α)(1/2 - l/x) - l(l+1)/x - x/4`.
fn eq7_bracket(n: f64, l: f64, alpha: f64, x: f64) -> f64 {
    n + (1.0 - alpha) * (0.5 - l / x) - l * (l + 1.0) / x - 0.25 * x
}

/// Coefficient of R in the x-variable rewritten form:
/// `n + (1-α)(1/x + 1/2) - l(l+1-α)/x - x/4`.
fn eq8_bracket(n: f64, l: f64, alpha: f64, x: f64) -> f64 {
    n + (1.0 - alpha) * (1.0 / x + 0.5) - l * (l + 1.0 - alpha) / x - 0.25 * x
}

/// Difference of the two x-variable brackets, `(l + 1 - α)/x`, in closed
/// form (verified against the expanded brackets in the tests). Multiplying
/// it by `R(x)` gives the pointwise residual gap between the two forms, and
/// it vanishes identically when `α = l + 1`.
pub fn bracket_discrepancy(spec: &OrbitalSpec, x: f64) -> Result<f64> {
    let (_, l) = require_classical(spec)?;
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::NonPositiveRadius(x));
    }
    Ok((l + 1.0 - spec.alpha()) / x)
}

fn require_classical(spec: &OrbitalSpec) -> Result<(f64, f64)> {
    let l_round = spec.l_star().round();
    if (spec.nu() - 1.0).abs() > f64::EPSILON || (spec.l_star() - l_round).abs() > INTEGER_L_TOL {
        return Err(Error::ClassicalFormRequired {
            nu: spec.nu(),
            l_star: spec.l_star(),
        });
    }
    Ok((spec.n_star(), l_round))
}

/// Max over the grid of the scaled deviation between analytic and central
/// finite-difference first/second derivatives with step `h`; second-order
/// accurate, so the deviation shrinks ~4x per halving of `h` until the
/// rounding floor.
pub fn fd_crosscheck(spec: &OrbitalSpec, grid: &[f64], h: f64) -> Result<f64> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::DegenerateStep(h));
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut worst = 0.0_f64;
    for &r in grid {
        if r <= 2.0 * h {
            return Err(Error::StepTooLargeForGrid { h, r });
        }
        let d = radial_derivatives(spec, r)?;
        let plus = spec.radial(r + h)?;
        let minus = spec.radial(r - h)?;
        let center = spec.radial(r)?;
        let fd1 = (plus - minus) / (2.0 * h);
        let fd2 = (plus - 2.0 * center + minus) / (h * h);
        // |R| + |R'| + |R''| scale: stays meaningful at nodes of R
        let scale = d.value.abs() + d.first.abs() + d.second.abs() + SCALE_EPS;
        worst = worst
            .max((fd1 - d.first).abs() / scale)
            .max((fd2 - d.second).abs() / scale);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid;

    fn spec(n: f64, l: f64, nu: f64, alpha: f64, zeta: f64) -> OrbitalSpec {
        OrbitalSpec::new(n, l, nu, alpha, zeta).unwrap()
    }

    #[test]
    fn derivatives_of_pure_exponential() {
        // R = 2 e^{-r}: derivatives alternate sign
        let s = spec(1.0, 0.0, 1.0, 0.0, 1.0);
        let d = radial_derivatives(&s, 1.0).unwrap();
        let e1 = 2.0 * (-1.0_f64).exp();
        assert!((d.value - e1).abs() <= 1e-14);
        assert!((d.first + e1).abs() <= 1e-14);
        assert!((d.second - e1).abs() <= 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for s in [
            spec(3.0, 1.0, 1.0, 1.0, 1.0),
            spec(5.0, 2.0, 1.0, 0.5, 2.0),
            spec(3.2, 0.7, 0.5, 1.0, 1.0),
            spec(4.5, 1.2, 0.3, 0.0, 0.5),
        ] {
            let g = grid::log_spaced(0.2, 15.0 / s.zeta(), 24);
            let dev = fd_crosscheck(&s, &g, 1e-4).unwrap();
            assert!(dev <= 1e-6, "deviation {dev:e}");
        }
    }

    #[test]
    fn fd_deviation_shrinks_quadratically() {
        let s = spec(3.0, 1.0, 1.0, 1.0, 1.0);
        let g = vec![0.7, 1.9, 4.3];
        let coarse = fd_crosscheck(&s, &g, 1e-2).unwrap();
        let fine = fd_crosscheck(&s, &g, 5e-3).unwrap();
        let ratio = coarse / fine;
        assert!(
            (3.2..=4.8).contains(&ratio),
            "expected ~4x shrink, got {ratio} ({coarse:e} -> {fine:e})"
        );
    }

    #[test]
    fn fd_rejects_degenerate_steps() {
        let s = spec(1.0, 0.0, 1.0, 0.0, 1.0);
        assert!(matches!(
            fd_crosscheck(&s, &[1.0], 0.0),
            Err(Error::DegenerateStep(_))
        ));
        assert!(matches!(
            fd_crosscheck(&s, &[0.1], 0.06),
            Err(Error::StepTooLargeForGrid { .. })
        ));
        assert!(matches!(
            fd_crosscheck(&s, &[], 1e-4),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn node_keeps_fd_metric_meaningful() {
        // at the node of the first excited state R = 0 but R' does not
        // vanish, and the |R|+|R'|+|R''| scale keeps the check strict
        let s = spec(2.0, 0.0, 1.0, 1.0, 1.0);
        let d = radial_derivatives(&s, 1.0).unwrap();
        assert!(d.value.abs() <= 1e-12);
        assert!(d.first.abs() > 0.1);
        let dev = fd_crosscheck(&s, &[1.0], 1e-4).unwrap();
        assert!(dev <= 1e-6);
    }

    #[test]
    fn collected_form_annihilates_ground_state() {
        // R ∝ e^{-ζr} at n = 1, l = 0: substituting gives residual
        // -ζ²/(3-α) - E = 0 at the fixed energy, up to rounding
        let s = spec(1.0, 0.0, 1.0, 1.0, 1.0);
        let g = grid::log_spaced(0.1, 20.0, 50);
        let report = residual(EquationId::Eq10, &s, &g).unwrap();
        assert!(report.max_rel <= 1e-10, "max_rel {:e}", report.max_rel);
        assert_eq!(report.points.len(), 50);
    }

    #[test]
    fn noninteger_form_reduces_to_collected_at_nu_one() {
        let s = spec(4.0, 1.0, 1.0, 0.5, 1.0);
        let g = grid::default_residual_grid(1.0);
        let a = residual(EquationId::Eq10, &s, &g).unwrap();
        let b = residual(EquationId::Eq11, &s, &g).unwrap();
        for (pa, pb) in a.points.iter().zip(&b.points) {
            assert!(
                (pa.residual - pb.residual).abs() <= 1e-12,
                "r={}: {:e} vs {:e}",
                pa.r,
                pa.residual,
                pb.residual
            );
        }
    }

    #[test]
    fn noninteger_form_annihilates_fractional_orbitals() {
        for s in [
            spec(3.2, 0.7, 0.5, 1.0, 1.0),
            spec(4.5, 1.2, 0.3, 0.0, 2.0),
            spec(2.5, 0.8, 0.7, 1.5, 0.5),
        ] {
            let g = grid::default_residual_grid(s.zeta());
            let report = residual(EquationId::Eq11, &s, &g).unwrap();
            assert!(report.max_rel <= 1e-8, "max_rel {:e}", report.max_rel);
        }
    }

    #[test]
    fn rewritten_form_does_not_vanish() {
        // the second x-variable bracket misses the first by (l+1-α)/x, so
        // its residual carries that scale instead of rounding noise
        let s = spec(2.0, 1.0, 1.0, 0.0, 1.0);
        let g = grid::default_residual_grid(1.0);
        let eq8 = residual(EquationId::Eq8, &s, &g).unwrap();
        assert!(eq8.max_rel > 1e-3, "max_rel {:e}", eq8.max_rel);
        let eq7 = residual(EquationId::Eq7, &s, &g).unwrap();
        assert!(eq7.max_rel <= 1e-10, "max_rel {:e}", eq7.max_rel);
    }

    #[test]
    fn bracket_discrepancy_closed_form() {
        // against independent evaluation of the two expanded brackets
        for (l, alpha, x) in [
            (0.0, 1.0, 1.7),
            (1.0, 1.0, 2.0),
            (2.0, 0.5, 0.9),
            (3.0, 2.0, 11.0),
        ] {
            let n = l + 1.0;
            let expanded = eq8_bracket(n, l, alpha, x) - eq7_bracket(n, l, alpha, x);
            let closed = (l + 1.0 - alpha) / x;
            assert!(
                (expanded - closed).abs() <= 1e-12 * (1.0 + closed.abs()),
                "l={l} alpha={alpha} x={x}: {expanded:e} vs {closed:e}"
            );
        }
        let s = spec(2.0, 1.0, 1.0, 1.0, 1.0);
        assert_eq!(bracket_discrepancy(&s, 2.0).unwrap(), 0.5);
        let s = spec(1.0, 0.0, 1.0, 1.0, 1.0);
        assert_eq!(bracket_discrepancy(&s, 0.37).unwrap(), 0.0);
    }

    #[test]
    fn residual_gap_equals_discrepancy_times_radial() {
        let s = spec(3.0, 1.0, 1.0, 0.5, 1.0);
        let g = grid::default_residual_grid(1.0);
        let eq7 = residual(EquationId::Eq7, &s, &g).unwrap();
        let eq8 = residual(EquationId::Eq8, &s, &g).unwrap();
        for (p7, p8) in eq7.points.iter().zip(&eq8.points) {
            let x = 2.0 * s.zeta() * p7.r;
            let expected = bracket_discrepancy(&s, x).unwrap() * s.radial(p7.r).unwrap();
            let d = radial_derivatives(&s, p7.r).unwrap();
            let scale = d.value.abs() + d.first.abs() + d.second.abs() + 1.0;
            assert!(
                ((p8.residual - p7.residual) - expected).abs() <= 1e-12 * scale,
                "r = {}: gap {:e} vs expected {:e}",
                p7.r,
                p8.residual - p7.residual,
                expected
            );
        }
    }

    #[test]
    fn classical_forms_reject_fractional_specs() {
        let s = spec(3.2, 0.7, 0.5, 1.0, 1.0);
        for eq in [EquationId::Eq7, EquationId::Eq8, EquationId::Eq10] {
            assert!(matches!(
                residual(eq, &s, &[1.0]),
                Err(Error::ClassicalFormRequired { .. })
            ));
        }
        assert!(residual(EquationId::Eq11, &s, &[1.0]).is_ok());
        assert!(matches!(
            bracket_discrepancy(&s, 1.0),
            Err(Error::ClassicalFormRequired { .. })
        ));
    }

    #[test]
    fn energy_override_detects_wrong_energy() {
        let s = spec(2.0, 0.0, 1.0, 1.0, 1.0);
        let g = grid::default_residual_grid(1.0);
        let energy = orbitals::sturmian_energy(1.0, 1.0).unwrap();
        let delta = 1e-3;
        let perturbed = residual_with_energy(EquationId::Eq10, &s, &g, energy + delta).unwrap();
        let peak_value = g
            .iter()
            .map(|&r| s.radial(r).unwrap().abs())
            .fold(0.0, f64::max);
        assert!(perturbed.max_abs >= 0.99 * delta * peak_value);
        assert!(matches!(
            residual_with_energy(EquationId::Eq7, &s, &g, energy),
            Err(Error::EnergyOverrideUnsupported)
        ));
    }

    #[test]
    fn empty_grid_is_rejected() {
        let s = spec(1.0, 0.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            residual(EquationId::Eq10, &s, &[]),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn equation_id_round_trips_through_strings() {
        for eq in [
            EquationId::Eq7,
            EquationId::Eq8,
            EquationId::Eq10,
            EquationId::Eq11,
        ] {
            assert_eq!(eq.to_string().parse::<EquationId>().unwrap(), eq);
        }
        assert!("EQ9".parse::<EquationId>().is_err());
    }
}
