//! Rates with Wilson score intervals, and sample moments.

/// Two-sided 99% standard normal quantile.
pub const Z99: f64 = 2.5758293035489;

/// An empirical proportion `hits / total` with its 99% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rate {
    pub hits: u64,
    pub total: u64,
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Rate {
    pub fn new(hits: u64, total: u64) -> Self {
        assert!(hits <= total, "{hits} hits out of {total}");
        if total == 0 {
            return Rate {
                hits,
                total,
                point: 0.0,
                lo: 0.0,
                hi: 1.0,
            };
        }
        let n = total as f64;
        let point = hits as f64 / n;
        let z2 = Z99 * Z99;
        let denom = 1.0 + z2 / n;
        let center = (point + z2 / (2.0 * n)) / denom;
        let half = Z99 * (point * (1.0 - point) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        Rate {
            hits,
            total,
            point,
            lo: (center - half).max(0.0).min(point),
            hi: (center + half).min(1.0).max(point),
        }
    }

    /// Binomial standard error of the point estimate.
    pub fn sigma(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        (self.point * (1.0 - self.point) / self.total as f64).sqrt()
    }
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub samples: usize,
}

impl MeanStd {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return MeanStd::default();
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        MeanStd { mean, std, samples: n }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // Closed form evaluated independently for 30/100 at z = 2.5758.
        let r = Rate::new(30, 100);
        assert!((r.lo - 0.19746).abs() < 1e-4, "{}", r.lo);
        assert!((r.hi - 0.42743).abs() < 1e-4, "{}", r.hi);
        let r = Rate::new(0, 1000);
        assert_eq!(r.lo, 0.0);
        assert!(r.hi > 0.0 && r.hi < 0.01);
        let r = Rate::new(1000, 1000);
        assert_eq!(r.hi, 1.0);
    }

    #[test]
    fn intervals_are_well_formed() {
        for total in [1u64, 7, 100, 12345] {
            for hits in [0, total / 3, total / 2, total] {
                let r = Rate::new(hits, total);
                assert!(0.0 <= r.lo && r.lo <= r.point && r.point <= r.hi && r.hi <= 1.0);
            }
        }
    }

    #[test]
    fn moments() {
        let m = MeanStd::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        assert!((m.std - 1.2909944).abs() < 1e-6);
        assert_eq!(MeanStd::of(&[]).samples, 0);
    }
}
