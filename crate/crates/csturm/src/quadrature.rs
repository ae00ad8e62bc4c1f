//! Generalized Gauss–Laguerre quadrature for the weight `x^a e^{-x}` on
//! `[0, ∞)` with real exponent `a > -1`.
//!
//! The rule is built from the Jacobi matrix of the Laguerre recurrence:
//! nodes are its eigenvalues, obtained with an implicit-shift QL iteration
//! on the symmetric tridiagonal form, and weights are the matching
//! Christoffel numbers `1 / Σ_k p_k(x_i)^2` over the orthonormal
//! polynomials. Weight accumulation is carried in log scale so that rules
//! with several hundred points keep finite `log_weights` even where the
//! weights themselves underflow `f64`.
//!
//! An M-point rule integrates `x^a e^{-x} · (polynomial of degree ≤ 2M-1)`
//! exactly up to rounding; `verify_moments` measures that claim against the
//! gamma-function moments `∫ x^{a+j} e^{-x} dx = Γ(a+j+1)`.

use crate::error::{Error, Result};
use crate::specfun;

/// Largest supported rule size.
pub const MAX_POINTS: usize = 512;

/// Iteration budget of the eigensolver, per matrix row.
const QL_SWEEPS_PER_ROW: usize = 50;

/// Rescaling threshold/factor for the orthonormal-polynomial recurrence.
const RESCALE_THRESHOLD: f64 = 1e120;
const RESCALE_FACTOR: f64 = 1e-120;

/// Nodes and log-scale weights of a generalized Gauss–Laguerre rule.
///
/// Invariants established at construction: nodes are strictly increasing
/// and positive, and every `log_weights` entry is finite (all weights are
/// strictly positive).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    param_a: f64,
    nodes: Vec<f64>,
    log_weights: Vec<f64>,
}

/// Symmetric-tridiagonal recurrence coefficients of the weight `x^a e^{-x}`:
/// diagonal `2i + a + 1` for `i = 0..M-1` and off-diagonal `sqrt(i (i + a))`
/// for `i = 1..M-1`.
pub fn recurrence_coefficients(a: f64, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !a.is_finite() || a <= -1.0 {
        return Err(Error::WeightExponent(a));
    }
    if m == 0 {
        return Err(Error::PointCount(m));
    }
    let diag = (0..m).map(|i| 2.0 * i as f64 + a + 1.0).collect();
    let offdiag = (1..m)
        .map(|i| {
            let i = i as f64;
            (i * (i + a)).sqrt()
        })
        .collect();
    Ok((diag, offdiag))
}

/// Build the M-point rule for weight exponent `a`.
pub fn gauss_laguerre_rule(a: f64, m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > MAX_POINTS {
        return Err(Error::PointCount(m));
    }
    let (mut diag, offdiag) = recurrence_coefficients(a, m)?;
    let mut e = offdiag;
    e.push(0.0); // scratch slot so e[i] pairs with d[i], d[i+1]
    let budget = QL_SWEEPS_PER_ROW * m;
    tridiagonal_eigenvalues(&mut diag, &mut e, budget)
        .map_err(|_| Error::EigensolverFailed { size: m, budget })?;
    diag.sort_by(f64::total_cmp);
    let nodes = diag;

    let spectrum_ok =
        nodes.iter().all(|x| x.is_finite() && *x > 0.0) && nodes.windows(2).all(|w| w[0] < w[1]);
    if !spectrum_ok {
        return Err(Error::EigensolverFailed { size: m, budget });
    }

    let lg_mu0 = specfun::log_gamma(a + 1.0)?;
    let log_weights: Vec<f64> = nodes
        .iter()
        .map(|&x| christoffel_log_weight(a, m, x, lg_mu0))
        .collect();
    if log_weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::EigensolverFailed { size: m, budget });
    }

    Ok(QuadratureRule {
        param_a: a,
        nodes,
        log_weights,
    })
}

impl QuadratureRule {
    /// Weight exponent `a`.
    pub fn param_a(&self) -> f64 {
        self.param_a
    }

    /// Number of nodes.
    pub fn count(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes in ascending order, all positive.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Natural logs of the weights, in node order.
    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Weights in linear scale. Entries may underflow to zero for very
    /// large rules; `log_weights` is the lossless representation.
    pub fn weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|w| w.exp()).collect()
    }

    /// Approximate `∫_0^∞ x^a e^{-x} f(x) dx` as `Σ_i w_i f(x_i)`.
    ///
    /// Exact up to rounding when `f` is a polynomial of degree `≤ 2M - 1`.
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let mut acc = 0.0;
        for (i, (&x, &lw)) in self.nodes.iter().zip(&self.log_weights).enumerate() {
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::NonFiniteIntegrand {
                    node_index: i,
                    node: x,
                });
            }
            acc += lw.exp() * fx;
        }
        Ok(acc)
    }

    /// Max over `j ≤ j_max` of the relative error of the j-th moment,
    /// `|Σ w_i x_i^j - Γ(a+j+1)| / Γ(a+j+1)`.
    ///
    /// Both sides are compared in log scale: the reference moment overflows
    /// `f64` already near j ≈ 170.
    pub fn verify_moments(&self, j_max: usize) -> Result<f64> {
        let limit = 2 * self.count() - 1;
        if j_max > limit {
            return Err(Error::MomentRange { j_max, limit });
        }
        let log_nodes: Vec<f64> = self.nodes.iter().map(|x| x.ln()).collect();
        let mut worst = 0.0_f64;
        for j in 0..=j_max {
            let jf = j as f64;
            let log_reference = specfun::log_gamma(self.param_a + jf + 1.0)?;
            let terms: Vec<f64> = self
                .log_weights
                .iter()
                .zip(&log_nodes)
                .map(|(&lw, &lx)| lw + jf * lx)
                .collect();
            let peak = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = terms.iter().map(|t| (t - peak).exp()).sum();
            let log_moment = peak + sum.ln();
            worst = worst.max((log_moment - log_reference).exp_m1().abs());
        }
        Ok(worst)
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by QL iteration with
/// implicit shifts. `d` holds the diagonal and is overwritten with the
/// (unordered) eigenvalues; `e` holds the off-diagonal in `e[0..n-1]` with
/// one scratch slot appended. Fails once the sweep budget is exhausted.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64], budget: usize) -> Result<()> {
    let n = d.len();
    let mut sweeps = 0usize;
    for l in 0..n {
        loop {
            // find the first negligible off-diagonal at or after l
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > budget {
                return Err(Error::EigensolverFailed { size: n, budget });
            }

            // implicit shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0_f64;
            let mut c = 1.0_f64;
            let mut p = 0.0_f64;
            let mut recovered = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // rotation underflow: drop the shift and retry
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    recovered = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if recovered {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// `log(1 / Σ_{k<m} p_k(x)^2)` for the orthonormal polynomials of the
/// weight, i.e. the log of the Christoffel number at `x`. The recurrence
/// is carried with a running scale factor so the squared sum never
/// overflows or underflows before the final log.
fn christoffel_log_weight(a: f64, m: usize, x: f64, lg_mu0: f64) -> f64 {
    // representation: true p_k = p * exp(log_scale)
    let mut log_scale = -0.5 * lg_mu0;
    let mut p_prev = 0.0_f64;
    let mut p = 1.0_f64;
    let mut sum_sq = 1.0_f64;
    for k in 0..m.saturating_sub(1) {
        let kf = k as f64;
        let beta_cur = if k == 0 { 0.0 } else { (kf * (kf + a)).sqrt() };
        let beta_next = ((kf + 1.0) * (kf + 1.0 + a)).sqrt();
        let next = ((x - (2.0 * kf + a + 1.0)) * p - beta_cur * p_prev) / beta_next;
        p_prev = p;
        p = next;
        sum_sq += p * p;
        if p.abs().max(p_prev.abs()) > RESCALE_THRESHOLD {
            p *= RESCALE_FACTOR;
            p_prev *= RESCALE_FACTOR;
            sum_sq *= RESCALE_FACTOR * RESCALE_FACTOR;
            log_scale -= RESCALE_FACTOR.ln();
        }
    }
    -(sum_sq.ln() + 2.0 * log_scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{laguerre_with_scale, LaguerreParams};
    use proptest::prelude::*;

    fn assert_rel(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol * want.abs().max(1e-300),
            "got {got:e} want {want:e} (tol {tol:e})"
        );
    }

    #[test]
    fn recurrence_coefficient_examples() {
        let (d, e) = recurrence_coefficients(0.0, 3).unwrap();
        assert_eq!(d, vec![1.0, 3.0, 5.0]);
        assert_eq!(e, vec![1.0, 2.0]);

        let (d, e) = recurrence_coefficients(1.0, 1).unwrap();
        assert_eq!(d, vec![2.0]);
        assert!(e.is_empty());

        let (d, e) = recurrence_coefficients(-0.5, 2).unwrap();
        assert_eq!(d, vec![0.5, 2.5]);
        assert_rel(e[0], std::f64::consts::FRAC_1_SQRT_2, 1e-15);
    }

    #[test]
    fn recurrence_coefficients_reject_bad_inputs() {
        assert!(matches!(
            recurrence_coefficients(-1.0, 4),
            Err(Error::WeightExponent(_))
        ));
        assert!(matches!(
            recurrence_coefficients(0.0, 0),
            Err(Error::PointCount(0))
        ));
    }

    #[test]
    fn one_point_rules() {
        let rule = gauss_laguerre_rule(0.0, 1).unwrap();
        assert_rel(rule.nodes()[0], 1.0, 1e-14);
        assert_rel(rule.weights()[0], 1.0, 1e-14);

        let rule = gauss_laguerre_rule(1.0, 1).unwrap();
        assert_rel(rule.nodes()[0], 2.0, 1e-14);
        assert_rel(rule.weights()[0], 1.0, 1e-14);
    }

    #[test]
    fn two_point_rule_closed_form() {
        // nodes are the roots of L_2(x) = (x^2 - 4x + 2)/2, i.e. 2 -+ sqrt 2,
        // weights from the two-point moment system
        let rule = gauss_laguerre_rule(0.0, 2).unwrap();
        assert_rel(rule.nodes()[0], 0.585_786_437_626_905, 1e-13);
        assert_rel(rule.nodes()[1], 3.414_213_562_373_095, 1e-13);
        assert_rel(rule.weights()[0], 0.853_553_390_593_273_7, 1e-13);
        assert_rel(rule.weights()[1], 0.146_446_609_406_726_24, 1e-13);
    }

    #[test]
    fn rule_size_bounds() {
        assert!(matches!(
            gauss_laguerre_rule(0.0, 0),
            Err(Error::PointCount(0))
        ));
        assert!(matches!(
            gauss_laguerre_rule(0.0, MAX_POINTS + 1),
            Err(Error::PointCount(_))
        ));
    }

    #[test]
    fn integrate_examples() {
        let rule = gauss_laguerre_rule(0.0, 4).unwrap();
        assert_rel(rule.integrate(|_| 1.0).unwrap(), 1.0, 1e-13);

        let rule = gauss_laguerre_rule(1.0, 1).unwrap();
        assert_rel(rule.integrate(|_| 1.0).unwrap(), 1.0, 1e-13);

        // moment Gamma(a + 3 + 1) with a = 0.5; frozen reference Gamma(4.5)
        let rule = gauss_laguerre_rule(0.5, 8).unwrap();
        assert_rel(
            rule.integrate(|x| x * x * x).unwrap(),
            11.631_728_396_567_45,
            1e-12,
        );
    }

    #[test]
    fn integrate_reports_bad_node() {
        let rule = gauss_laguerre_rule(0.0, 4).unwrap();
        let bad = rule.nodes()[2];
        let err = rule
            .integrate(|x| if x == bad { f64::NAN } else { 1.0 })
            .unwrap_err();
        assert!(matches!(
            err,
            Error::NonFiniteIntegrand { node_index: 2, .. }
        ));
    }

    #[test]
    fn moments_are_exact() {
        assert!(
            gauss_laguerre_rule(0.7, 3)
                .unwrap()
                .verify_moments(0)
                .unwrap()
                <= 1e-12
        );
        assert!(
            gauss_laguerre_rule(0.0, 16)
                .unwrap()
                .verify_moments(31)
                .unwrap()
                <= 1e-10
        );
        assert!(
            gauss_laguerre_rule(2.3, 32)
                .unwrap()
                .verify_moments(63)
                .unwrap()
                <= 1e-9
        );
    }

    #[test]
    fn moment_range_is_enforced() {
        let rule = gauss_laguerre_rule(0.0, 4).unwrap();
        assert!(matches!(
            rule.verify_moments(8),
            Err(Error::MomentRange { j_max: 8, limit: 7 })
        ));
    }

    #[test]
    fn zeroth_moment_matches_gamma() {
        for &(a, m) in &[(-0.5, 8), (0.0, 32), (1.3, 64), (2.3, 128)] {
            let rule = gauss_laguerre_rule(a, m).unwrap();
            let total: f64 = rule.weights().iter().sum();
            let mu0 = specfun::log_gamma(a + 1.0).unwrap().exp();
            assert_rel(total, mu0, 1e-12);
        }
    }

    #[test]
    fn nodes_are_laguerre_roots() {
        for &(a, m) in &[(0.0, 8), (-0.5, 12), (1.7, 20)] {
            let rule = gauss_laguerre_rule(a, m).unwrap();
            let params = LaguerreParams::new(a, m as u32).unwrap();
            for &x in rule.nodes() {
                let (value, scale) = laguerre_with_scale(params, x).unwrap();
                assert!(
                    value.abs() <= 1e-8 * scale,
                    "a={a} m={m}: L at node {x} is {value:e} (scale {scale:e})"
                );
            }
        }
    }

    #[test]
    fn large_rule_keeps_finite_log_weights() {
        // linear-scale first-eigenvector components underflow near M ~ 200;
        // the log-scale pipeline must not
        let rule = gauss_laguerre_rule(0.0, 256).unwrap();
        assert!(rule.log_weights().iter().all(|w| w.is_finite()));
        let min_lw = rule
            .log_weights()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert!(
            min_lw < -745.0,
            "expected sub-f64 weights, min log weight {min_lw}"
        );
        let total: f64 = rule.weights().iter().sum();
        assert_rel(total, 1.0, 1e-12);
        assert!(rule.verify_moments(63).unwrap() <= 1e-9);

        let rule = gauss_laguerre_rule(0.3, MAX_POINTS).unwrap();
        assert!(rule.log_weights().iter().all(|w| w.is_finite()));
    }

    proptest! {
        #[test]
        fn nodes_interlace(a in -0.9f64..3.0, m in 2usize..40) {
            let small = gauss_laguerre_rule(a, m).unwrap();
            let large = gauss_laguerre_rule(a, m + 1).unwrap();
            for i in 0..m {
                prop_assert!(large.nodes()[i] < small.nodes()[i]);
                prop_assert!(small.nodes()[i] < large.nodes()[i + 1]);
            }
        }

        #[test]
        fn weights_positive_and_normalized(a in -0.9f64..3.0, m in 1usize..64) {
            let rule = gauss_laguerre_rule(a, m).unwrap();
            prop_assert!(rule.log_weights().iter().all(|w| w.is_finite()));
            let total: f64 = rule.weights().iter().sum();
            let mu0 = specfun::log_gamma(a + 1.0).unwrap().exp();
            prop_assert!((total - mu0).abs() <= 1e-12 * mu0);
        }
    }
}
