//! Empirical privacy audit on the decode-of-`u` observable.

use dpset_core::{encode, Error, Params, UniverseElement};
use rayon::prelude::*;

use crate::seed::MasterSeed;
use crate::stats::Rate;
use crate::utility::draw_workload;

/// Likelihood ratios between neighbouring inputs `S + u` and `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    /// `Pr[decode(Enc(S + u), u) = 1]`.
    pub with_u: Rate,
    /// `Pr[decode(Enc(S), u) = 1]`.
    pub without_u: Rate,
    pub ratio: f64,
    pub ratio_lo: f64,
    pub ratio_hi: f64,
    /// Largest lower confidence limit over the four one-sided ratios
    /// (decode 1 and decode 0, in both directions).
    pub worst_ratio_lo: f64,
    /// `e^epsilon_achieved`.
    pub bound: f64,
}

impl AuditReport {
    /// No ratio is significantly above the privacy bound.
    pub fn pass(&self) -> bool {
        self.worst_ratio_lo <= self.bound
    }
}

fn ratio_interval(num: &Rate, den: &Rate) -> (f64, f64, f64) {
    let div = |a: f64, b: f64| if b > 0.0 { a / b } else { f64::INFINITY };
    (div(num.point, den.point), div(num.lo, den.hi), div(num.hi, den.lo))
}

fn complement(r: &Rate) -> Rate {
    Rate::new(r.total - r.hits, r.total)
}

/// Fixes a random `S` of size `k` and `u` outside it, then decodes `u`
/// against `per_side` fresh encodings of each of `S + u` and `S`.
pub fn dp_audit(params: &Params, k: usize, per_side: u64, seed: &MasterSeed) -> Result<AuditReport, Error> {
    if k + 1 > params.k_hat() {
        return Err(Error::SetTooLarge {
            size: k + 1,
            k_hat: params.k_hat(),
        });
    }
    let (set, others) = draw_workload(params, k + 1, &mut seed.derive(0).trial_rng(0));
    let u = set[k].clone();
    debug_assert!(!others.contains(&u));
    let without: Vec<UniverseElement> = set[..k].to_vec();

    let hits = |input: &[UniverseElement], label: u64| -> Result<u64, Error> {
        let side = seed.derive(label);
        (0..per_side)
            .into_par_iter()
            .map(|i| {
                let mut rng = side.trial_rng(i);
                encode(input, params, &mut rng).map(|e| e.decode(&u) as u64)
            })
            .sum()
    };
    let with_u = Rate::new(hits(&set, 1)?, per_side);
    let without_u = Rate::new(hits(&without, 2)?, per_side);

    let (ratio, ratio_lo, ratio_hi) = ratio_interval(&with_u, &without_u);
    let worst_ratio_lo = [
        ratio_lo,
        ratio_interval(&without_u, &with_u).1,
        ratio_interval(&complement(&with_u), &complement(&without_u)).1,
        ratio_interval(&complement(&without_u), &complement(&with_u)).1,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(AuditReport {
        with_u,
        without_u,
        ratio,
        ratio_lo,
        ratio_hi,
        worst_ratio_lo,
        bound: params.epsilon_achieved().exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dpset_core::{derive_params, Mode};

    #[test]
    fn ternary_ratio_near_two() {
        let params = derive_params(2f64.ln(), 1e-9, 33, 0.05, Mode::Band).unwrap();
        let r = dp_audit(&params, 32, 6000, &MasterSeed::from_u64(5)).unwrap();
        assert!((r.with_u.point - 2.0 / 3.0).abs() < 0.03);
        assert!((r.without_u.point - 1.0 / 3.0).abs() < 0.03);
        assert!(r.ratio_lo <= r.ratio && r.ratio <= r.ratio_hi);
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn trivial_mode_ratio_near_one() {
        let params = derive_params(0.5, 0.0, 9, 0.05, Mode::Trivial).unwrap();
        let r = dp_audit(&params, 8, 4000, &MasterSeed::from_u64(6)).unwrap();
        assert!((r.ratio - 1.0).abs() < 0.1, "{r:?}");
        assert_eq!(r.bound, 1.0);
    }
}
