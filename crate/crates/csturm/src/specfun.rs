//! Scalar special-function kernels: log-gamma and generalized Laguerre
//! polynomials of real order and integer degree.
//!
//! The Laguerre convention is the modern one,
//!
//! ```text
//! L^a_0 = 1,   L^a_1 = 1 + a - x,
//! (k+1) L^a_{k+1} = (2k + 1 + a - x) L^a_k - (k + a) L^a_{k-1},
//! ```
//!
//! under which `d/dx L^a_k = -L^{a+1}_{k-1}` and each polynomial solves
//! `x y'' + (a + 1 - x) y' + k y = 0`. The derivative carries a minus sign;
//! some of the older orbital literature prints the identity without it, and
//! the finite-difference cross-checks in this crate's tests pin the sign.

use crate::error::{Error, Result};

/// Order/degree pair of a generalized Laguerre polynomial `L^a_k`.
///
/// The order `a` is real and must exceed -1 so that the weight `x^a e^{-x}`
/// is integrable at the origin; the degree `k` is a nonnegative integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreParams {
    order_a: f64,
    degree_k: u32,
}

impl LaguerreParams {
    pub fn new(order_a: f64, degree_k: u32) -> Result<Self> {
        if !order_a.is_finite() || order_a <= -1.0 {
            return Err(Error::LaguerreOrder(order_a));
        }
        Ok(Self { order_a, degree_k })
    }

    pub fn order(&self) -> f64 {
        self.order_a
    }

    pub fn degree(&self) -> u32 {
        self.degree_k
    }
}

// Lanczos coefficients (g = 7, n = 9), Godfrey's set as used by Boost and
// CPython. Worst observed error of the assembled log-gamma against a
// 40-digit reference is ~3e-15 relative over [1e-3, 1e6].
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Lanczos evaluation, valid for x >= 0.5.
fn lanczos_log_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + 7.5;
    LN_SQRT_2PI + series.ln() + (z + 0.5) * t.ln() - t
}

/// Natural logarithm of the gamma function for positive arguments.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::LogGammaDomain(x));
    }
    if x < 0.5 {
        // recurrence ln G(x) = ln G(x+1) - ln x keeps the Lanczos sum away
        // from its pole at zero
        Ok(lanczos_log_gamma(x + 1.0) - x.ln())
    } else {
        Ok(lanczos_log_gamma(x))
    }
}

/// Evaluate `L^a_k(x)` by upward recurrence in the degree.
pub fn laguerre(params: LaguerreParams, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::LaguerreArgument(x));
    }
    let a = params.order_a;
    match params.degree_k {
        0 => Ok(1.0),
        k => {
            let mut prev = 1.0_f64;
            let mut cur = 1.0 + a - x;
            for i in 1..k {
                let i = f64::from(i);
                let next = ((2.0 * i + 1.0 + a - x) * cur - (i + a) * prev) / (i + 1.0);
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
    }
}

/// As `laguerre`, but also returns the largest intermediate magnitude seen
/// by the recurrence — a cheap conditioning scale for near-root assertions.
#[cfg(test)]
pub(crate) fn laguerre_with_scale(params: LaguerreParams, x: f64) -> Result<(f64, f64)> {
    let a = params.order_a;
    match params.degree_k {
        0 => Ok((1.0, 1.0)),
        k => {
            let mut prev = 1.0_f64;
            let mut cur = 1.0 + a - x;
            let mut scale = cur.abs().max(1.0);
            for i in 1..k {
                let i = f64::from(i);
                let next = ((2.0 * i + 1.0 + a - x) * cur - (i + a) * prev) / (i + 1.0);
                prev = cur;
                cur = next;
                scale = scale.max(cur.abs());
            }
            Ok((cur, scale))
        }
    }
}

/// m-th derivative (m = 1 or 2) of `L^a_k` at `x`, via the order-shift
/// identity `d/dx L^a_k = -L^{a+1}_{k-1}` applied m times. Zero when the
/// derivative order exceeds the degree.
pub fn laguerre_deriv(params: LaguerreParams, x: f64, m: u32) -> Result<f64> {
    if m == 0 || m > 2 {
        return Err(Error::DerivativeOrder(m));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::LaguerreArgument(x));
    }
    if m > params.degree_k {
        return Ok(0.0);
    }
    let shifted = LaguerreParams::new(params.order_a + f64::from(m), params.degree_k - m)?;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * laguerre(shifted, x)?)
}

/// Residual of the defining equation, `x L'' + (a + 1 - x) L' + k L`,
/// evaluated with `laguerre` and `laguerre_deriv`. Vanishes (to rounding)
/// for every valid parameter pair.
pub fn laguerre_ode_residual(params: LaguerreParams, x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::LaguerreArgument(x));
    }
    let value = laguerre(params, x)?;
    let d1 = laguerre_deriv(params, x, 1)?;
    let d2 = laguerre_deriv(params, x, 2)?;
    Ok(x * d2 + (params.order_a + 1.0 - x) * d1 + f64::from(params.degree_k) * value)
}
