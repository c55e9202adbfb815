//! Utility trials: encode a random set, query members and non-members.

use std::collections::HashSet;
use std::time::Instant;

use dpset_core::{encode, Error, Mode, Params, UniverseElement};
use rand::seq::index::sample;
use rand::RngCore;
use rayon::prelude::*;

use crate::bounds::{space_lower_bound_bits, utility_lower_bound};
use crate::seed::MasterSeed;
use crate::stats::{MeanStd, Rate};

/// Length of the random universe elements drawn in band and trivial mode.
pub const ELEMENT_BYTES: usize = 16;

/// Aggregated results of a utility run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub mode: Mode,
    pub epsilon_target: f64,
    pub epsilon_achieved: f64,
    pub q: u32,
    pub k: usize,
    pub m: usize,
    pub w: usize,
    pub trials: u64,
    pub fpr: Rate,
    pub fnr: Rate,
    /// Whichever of `fpr` and `fnr` is larger.
    pub error: Rate,
    pub encode_ms: MeanStd,
    pub decode_us: MeanStd,
    pub fallback_count: u64,
    /// Largest serialized size over non-fallback encodings.
    pub encoding_bytes: usize,
    pub solution_bytes: usize,
    /// Universe size used for the space bound.
    pub universe_size: f64,
}

impl TrialStats {
    pub fn alpha_lower_bound(&self) -> f64 {
        utility_lower_bound(self.epsilon_achieved, 0.0)
    }

    /// Harness consistency checks; each returned string names a violation.
    pub fn self_check(&self) -> Vec<String> {
        let mut out = Vec::new();
        let three_sigma = 3.0 * self.error.sigma();
        let floor = self.alpha_lower_bound() - three_sigma;
        if self.error.point < floor {
            out.push(format!(
                "error {:.5} is below the lower bound {:.5} by more than 3 sigma",
                self.error.point,
                self.alpha_lower_bound()
            ));
        }
        let ceiling = match self.mode {
            Mode::Trivial => 0.5,
            _ => 1.0 / self.q as f64,
        };
        if self.error.point > ceiling + three_sigma {
            out.push(format!(
                "error {:.5} exceeds 1/q = {ceiling:.5} by more than 3 sigma",
                self.error.point
            ));
        }
        if self.mode != Mode::Trivial && self.encoding_bytes > 0 {
            let alpha = 1.0 / self.q as f64;
            let bits = space_lower_bound_bits(self.k, alpha, self.universe_size);
            if (self.encoding_bytes as f64) * 8.0 < bits {
                out.push(format!(
                    "encoding of {} bytes is below the space bound of {bits:.0} bits",
                    self.encoding_bytes
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct TrialRecord {
    false_positives: u64,
    non_members: u64,
    false_negatives: u64,
    members: u64,
    fallback: bool,
    encode_ms: f64,
    decode_us: f64,
    bytes: usize,
    solution_bytes: usize,
}

/// A random set of `k` members and up to `k` disjoint non-members.
///
/// Band and trivial mode draw fresh 16-byte strings; Vandermonde mode draws
/// distinct field elements.
pub fn draw_workload<R: RngCore>(
    params: &Params,
    k: usize,
    rng: &mut R,
) -> (Vec<UniverseElement>, Vec<UniverseElement>) {
    if params.mode() == Mode::Vandermonde {
        let q = params.field().order() as usize;
        let outside = k.min(q - k);
        let picks = sample(rng, q, k + outside).into_vec();
        let to_elem = |i: &usize| UniverseElement::from_index(*i as u32);
        return (
            picks[..k].iter().map(to_elem).collect(),
            picks[k..].iter().map(to_elem).collect(),
        );
    }
    let mut seen = HashSet::with_capacity(2 * k);
    let mut draw = |rng: &mut R| loop {
        let mut b = [0u8; ELEMENT_BYTES];
        rng.fill_bytes(&mut b);
        if seen.insert(b) {
            return UniverseElement::new(b.to_vec());
        }
    };
    let members = (0..k).map(|_| draw(rng)).collect();
    let others = (0..k).map(|_| draw(rng)).collect();
    (members, others)
}

fn run_trial(params: &Params, k: usize, seed: &MasterSeed, index: u64, timing: bool) -> Result<TrialRecord, Error> {
    let mut rng = seed.trial_rng(index);
    let (members, others) = draw_workload(params, k, &mut rng);
    let start = Instant::now();
    let enc = encode(&members, params, &mut rng)?;
    let encode_ms = start.elapsed().as_secs_f64() * 1e3;

    let start = Instant::now();
    let member_hits = members.iter().filter(|u| enc.decode(u)).count() as u64;
    let other_hits = others.iter().filter(|u| enc.decode(u)).count() as u64;
    let queries = (members.len() + others.len()).max(1) as f64;
    let decode_us = start.elapsed().as_secs_f64() * 1e6 / queries;

    Ok(TrialRecord {
        false_positives: other_hits,
        non_members: others.len() as u64,
        false_negatives: members.len() as u64 - member_hits,
        members: members.len() as u64,
        fallback: enc.is_fallback(),
        encode_ms: if timing { encode_ms } else { 0.0 },
        decode_us: if timing { decode_us } else { 0.0 },
        bytes: if enc.is_fallback() { 0 } else { enc.serialized_len() },
        solution_bytes: enc.solution_bytes(),
    })
}

/// Runs `trials` independent encode/query rounds with sets of size `k`.
///
/// Trial `i` draws all of its randomness from `seed.trial_rng(i)`, so the
/// counts are identical for any thread count. With `timing` set, one
/// discarded warm-up trial precedes the measured ones.
pub fn run_utility(
    params: &Params,
    k: usize,
    trials: u64,
    seed: &MasterSeed,
    timing: bool,
) -> Result<TrialStats, Error> {
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1".into(),
        });
    }
    if k > params.k_hat() {
        return Err(Error::SetTooLarge {
            size: k,
            k_hat: params.k_hat(),
        });
    }
    if timing {
        run_trial(params, k, &seed.derive(u64::MAX), 0, false)?;
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(params, k, seed, i, timing))
        .collect::<Result<Vec<_>, _>>()?;

    let sum = |f: fn(&TrialRecord) -> u64| records.iter().map(f).sum::<u64>();
    let fpr = Rate::new(sum(|r| r.false_positives), sum(|r| r.non_members));
    let fnr = Rate::new(sum(|r| r.false_negatives), sum(|r| r.members));
    let error = if fpr.point >= fnr.point { fpr } else { fnr };
    let (encode_ms, decode_us) = if timing {
        let e: Vec<f64> = records.iter().map(|r| r.encode_ms).collect();
        let d: Vec<f64> = records.iter().map(|r| r.decode_us).collect();
        (MeanStd::of(&e), MeanStd::of(&d))
    } else {
        (MeanStd::default(), MeanStd::default())
    };
    let universe_size = match params.mode() {
        Mode::Vandermonde => params.field().order() as f64,
        _ => 2f64.powi(8 * ELEMENT_BYTES as i32),
    };
    Ok(TrialStats {
        mode: params.mode(),
        epsilon_target: params.epsilon_target(),
        epsilon_achieved: params.epsilon_achieved(),
        q: params.field().order(),
        k,
        m: params.m(),
        w: params.w(),
        trials,
        fpr,
        fnr,
        error,
        encode_ms,
        decode_us,
        fallback_count: records.iter().filter(|r| r.fallback).count() as u64,
        encoding_bytes: records.iter().map(|r| r.bytes).max().unwrap_or(0),
        solution_bytes: records.iter().map(|r| r.solution_bytes).max().unwrap_or(0),
        universe_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dpset_core::{derive_params, HEADER_LEN};

    #[test]
    fn small_run_is_reproducible_and_sane() {
        let params = derive_params(3f64.ln(), 1e-9, 256, 0.05, Mode::Band).unwrap();
        let seed = MasterSeed::from_u64(1);
        let a = run_utility(&params, 256, 40, &seed, false).unwrap();
        let b = run_utility(&params, 256, 40, &seed, false).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.fpr.total, 40 * 256);
        assert!((a.fpr.point - 0.25).abs() < 0.02);
        assert!((a.fnr.point - 0.25).abs() < 0.02);
        assert_eq!(a.encoding_bytes, HEADER_LEN + (269 * 2usize).div_ceil(8));
        assert!(a.self_check().is_empty(), "{:?}", a.self_check());
    }

    #[test]
    fn vandermonde_workload_is_distinct_field_elements() {
        let params = derive_params(3.0, 0.0, 15, 0.05, Mode::Vandermonde).unwrap();
        let mut rng = MasterSeed::from_u64(2).trial_rng(0);
        let (members, others) = draw_workload(&params, 15, &mut rng);
        assert_eq!(others.len(), 8);
        let all: HashSet<u32> = members.iter().chain(&others).map(|u| u.as_index().unwrap()).collect();
        assert_eq!(all.len(), 23);
    }

    #[test]
    fn rejects_zero_trials_and_oversized_sets() {
        let params = derive_params(1.0, 1e-6, 10, 0.05, Mode::Band).unwrap();
        let seed = MasterSeed::default();
        assert!(run_utility(&params, 10, 0, &seed, false).is_err());
        assert!(run_utility(&params, 11, 1, &seed, false).is_err());
    }
}
