//! Empirical failure rate of the band solver as a function of band width.

use dpset_core::{encode, Error, FieldSpec, Mode, ParamsBuilder};
use rayon::prelude::*;

use crate::seed::MasterSeed;
use crate::utility::draw_workload;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationRow {
    pub w: usize,
    pub trials: u64,
    pub failures: u64,
}

impl CalibrationRow {
    pub fn failure_rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }
}

/// For each width in `grid`, encodes `trials` random `k`-sets over `field`
/// with `m = ceil((1 + beta) k)` and counts fallbacks.
pub fn calibrate_band_width(
    k: usize,
    beta: f64,
    field: FieldSpec,
    grid: &[usize],
    trials: u64,
    seed: &MasterSeed,
) -> Result<Vec<CalibrationRow>, Error> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "needs at least one band width".into(),
        });
    }
    let epsilon = ((field.order() - 1) as f64).ln().max(f64::MIN_POSITIVE);
    grid.iter()
        .map(|&w| {
            let params = ParamsBuilder::new(Mode::Band, epsilon, k)
                .beta(beta)
                .field(field)
                .band_width(w)
                .build()?;
            let seed = seed.derive(w as u64);
            let failures = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let mut rng = seed.trial_rng(i);
                    let (set, _) = draw_workload(&params, k, &mut rng);
                    encode(&set, &params, &mut rng).map(|e| e.is_fallback() as u64)
                })
                .sum::<Result<u64, Error>>()?;
            Ok(CalibrationRow { w, trials, failures })
        })
        .collect()
}

/// True when the failure rate never increases along the rows.
pub fn is_non_increasing(rows: &[CalibrationRow]) -> bool {
    rows.windows(2).all(|p| p[1].failure_rate() <= p[0].failure_rate())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrow_bands_fail_wide_bands_do_not() {
        let field = FieldSpec::binary(2).unwrap();
        let rows = calibrate_band_width(300, 0.05, field, &[2, 8, 40], 40, &MasterSeed::from_u64(3)).unwrap();
        assert_eq!(rows[0].failures, 40);
        assert_eq!(rows[2].failures, 0);
        assert!(is_non_increasing(&rows));
    }

    #[test]
    fn empty_grid_rejected() {
        let field = FieldSpec::prime(3).unwrap();
        assert!(calibrate_band_width(10, 0.05, field, &[], 1, &MasterSeed::default()).is_err());
    }
}
