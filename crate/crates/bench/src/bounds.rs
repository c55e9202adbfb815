//! Reference lower bounds on error and space.

use std::f64::consts::E;

/// No `(epsilon, delta)`-private representation can have per-query error
/// below `(1 - delta)/(e^epsilon + 1)`.
pub fn utility_lower_bound(epsilon: f64, delta: f64) -> f64 {
    (1.0 - delta) / (epsilon.exp() + 1.0)
}

/// Bits any representation with error `alpha` needs for `k`-subsets of an
/// `n`-element universe, clamped at 0:
/// `(1 - 2 alpha) k log2(1/alpha - 1) - 2 log2 k - log2 log2(e n / k)`.
pub fn space_lower_bound_bits(k: usize, alpha: f64, universe_size: f64) -> f64 {
    let k_f = k as f64;
    let lead = (1.0 - 2.0 * alpha) * k_f * (1.0 / alpha - 1.0).log2();
    let bits = lead - 2.0 * k_f.log2() - (E * universe_size / k_f).log2().log2();
    bits.max(0.0)
}

/// One row of the `bounds` table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub epsilon: f64,
    pub delta: f64,
    pub alpha_lower: f64,
    pub space_lower_bits: f64,
}

impl BoundsRow {
    pub fn new(epsilon: f64, delta: f64, k: usize, universe_size: f64) -> Self {
        let alpha_lower = utility_lower_bound(epsilon, delta);
        BoundsRow {
            epsilon,
            delta,
            alpha_lower,
            space_lower_bits: space_lower_bound_bits(k, alpha_lower, universe_size),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn utility_examples() {
        assert!((utility_lower_bound(2f64.ln(), 0.0) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(utility_lower_bound(0.0, 0.0), 0.5);
        let d = 2f64.powi(-40);
        let got = utility_lower_bound(15f64.ln(), d);
        assert!((got - 0.0625 * (1.0 - d)).abs() < 1e-15);
        // The rounded tick 2.71 is within a percent of ln 15.
        assert!((utility_lower_bound(2.71, d) - 0.0625).abs() < 1e-3);
    }

    #[test]
    fn space_examples() {
        let n = 2f64.powi(128);
        assert_eq!(space_lower_bound_bits(4096, 0.5, n), 0.0);
        let want = 0.5 * 4096.0 * 3f64.log2() - 24.0 - (E.log2() + 116.0).log2();
        assert!((space_lower_bound_bits(4096, 0.25, n) - want).abs() < 1e-9);
        assert!((want - 3215.127).abs() < 1e-3, "{want}");
    }

    #[test]
    fn space_monotone_in_alpha() {
        let n = 2f64.powi(64);
        let mut prev = f64::INFINITY;
        for i in 1..=500 {
            let alpha = i as f64 / 1000.0;
            let b = space_lower_bound_bits(1 << 12, alpha, n);
            assert!(b >= 0.0 && b <= prev, "alpha {alpha}");
            prev = b;
        }
    }

    #[test]
    fn bounds_row_ranges() {
        for eps in [0.0, 0.5, 2.0, 8.0] {
            let r = BoundsRow::new(eps, 1e-6, 1000, 1e12);
            assert!(r.alpha_lower > 0.0 && r.alpha_lower <= 0.5);
            assert!(r.space_lower_bits >= 0.0);
        }
    }
}
