//! Radial grid construction helpers.

/// `points` linearly spaced values from `lo` to `hi` inclusive.
pub fn linear_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + i as f64 * step).collect()
}

/// `points` log-spaced values from `lo` to `hi` inclusive; requires `lo > 0`.
pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    (0..points).map(|i| lo * (i as f64 * ratio).exp()).collect()
}

/// Default residual-check grid: 64 log-spaced radii in `[0.1, 20] / zeta`,
/// covering the turning-point region without entering the far tail.
pub fn default_residual_grid(zeta: f64) -> Vec<f64> {
    log_spaced(0.1 / zeta, 20.0 / zeta, 64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_endpoints() {
        let lin = linear_spaced(1.0, 3.0, 5);
        assert_eq!(lin, vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        let log = log_spaced(0.1, 10.0, 3);
        assert!((log[0] - 0.1).abs() < 1e-15);
        assert!((log[1] - 1.0).abs() < 1e-12);
        assert!((log[2] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn default_grid_scales_with_zeta() {
        let g = default_residual_grid(2.0);
        assert_eq!(g.len(), 64);
        assert!((g[0] - 0.05).abs() < 1e-15);
        assert!((g[63] - 10.0).abs() < 1e-12);
    }
}
