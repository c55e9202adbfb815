//! Random band linear systems.
//!
//! Each row holds `w` consecutive coefficients at a hashed offset. Sorting
//! rows by offset and eliminating left to right keeps every row short, so a
//! system with `m` columns solves in expected `O(m w)` time.

use rand::RngCore;

use crate::error::Error;
use crate::field::{Field, FieldElement};
use crate::hashing::{hash_band_start, hash_band_values, HashSeed, UniverseElement};

/// One linear constraint whose nonzero coefficients sit in
/// `start..start + coeffs.len()` (0-based columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBandRow {
    pub start: usize,
    pub coeffs: Vec<FieldElement>,
    pub rhs: FieldElement,
}

impl SparseBandRow {
    pub fn end(&self) -> usize {
        self.start + self.coeffs.len()
    }

    /// `row . x`; reads exactly `coeffs.len()` coordinates of `x`.
    pub fn eval(&self, x: &[FieldElement], field: &Field) -> FieldElement {
        field.dot(&self.coeffs, &x[self.start..self.end()])
    }

    pub fn is_satisfied_by(&self, x: &[FieldElement], field: &Field) -> bool {
        self.eval(x, field) == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandSolveOutcome {
    /// `None` when the rows are not linearly independent.
    pub solution: Option<Vec<FieldElement>>,
    /// Row subtractions performed during the forward pass.
    pub eliminations: usize,
}

/// Builds the band row for `u`. The right-hand side is left at zero.
pub fn row_band(
    u: &UniverseElement,
    start_seed: &HashSeed,
    values_seed: &HashSeed,
    m: usize,
    w: usize,
    field: &Field,
) -> Result<SparseBandRow, Error> {
    let start = hash_band_start(start_seed, u, m, w)?;
    Ok(SparseBandRow {
        start,
        coeffs: hash_band_values(values_seed, u, w, field),
        rhs: FieldElement::ZERO,
    })
}

/// Solves `M x = b` for band rows over `m` columns.
///
/// Rows are processed in order of `start` (ties keep input order). Any row
/// that eliminates to all zeros makes the outcome `None`, whatever its
/// right-hand side. Free columns get independent uniform values from `rng`,
/// drawn in increasing column order before back substitution.
pub fn solve_band<R: RngCore + ?Sized>(
    mut rows: Vec<SparseBandRow>,
    m: usize,
    field: &Field,
    rng: &mut R,
) -> Result<BandSolveOutcome, Error> {
    if rows.len() > m {
        return Err(Error::TooManyRows { rows: rows.len(), m });
    }
    for r in &rows {
        if r.end() > m {
            return Err(Error::RowOutOfRange {
                start: r.start,
                len: r.coeffs.len(),
                m,
            });
        }
    }
    rows.sort_by_key(|r| r.start);

    // pivot[c] holds the normalized row whose leading 1 is at column c.
    let mut pivot: Vec<Vec<FieldElement>> = vec![Vec::new(); m];
    let mut pivot_rhs = vec![FieldElement::ZERO; m];
    let mut eliminations = 0;

    for row in rows {
        let SparseBandRow { start, mut coeffs, mut rhs } = row;
        let mut col = start;
        let mut off = 0;
        loop {
            match coeffs[off..].iter().position(|c| !c.is_zero()) {
                None => {
                    return Ok(BandSolveOutcome {
                        solution: None,
                        eliminations,
                    })
                }
                Some(skip) => {
                    off += skip;
                    col += skip;
                }
            }
            let lead = coeffs[off];
            if pivot[col].is_empty() {
                let scale = field.inv(lead)?;
                let mut tail = coeffs.split_off(off);
                field.scale_in_place(&mut tail, scale);
                pivot_rhs[col] = field.mul(rhs, scale);
                pivot[col] = tail;
                break;
            }
            let p = &pivot[col];
            let needed = off + p.len();
            if coeffs.len() < needed {
                coeffs.resize(needed, FieldElement::ZERO);
            }
            field.sub_scaled(&mut coeffs[off..], lead, p);
            rhs = field.sub(rhs, field.mul(lead, pivot_rhs[col]));
            eliminations += 1;
        }
    }

    let mut x = vec![FieldElement::ZERO; m];
    for (c, p) in pivot.iter().enumerate() {
        if p.is_empty() {
            x[c] = field.uniform_element(rng);
        }
    }
    for c in (0..m).rev() {
        let p = &pivot[c];
        if !p.is_empty() {
            let tail = field.dot(&p[1..], &x[c + 1..c + p.len()]);
            x[c] = field.sub(pivot_rhs[c], tail);
        }
    }
    Ok(BandSolveOutcome {
        solution: Some(x),
        eliminations,
    })
}

/// Constants of the band-width rule
/// `w = ceil(a * log2(1/delta) + b * log2(k_hat)) + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandWidthConstants {
    pub per_log_inv_delta: f64,
    pub per_log_k: f64,
    pub offset: f64,
}

impl BandWidthConstants {
    /// Unit coefficients, no offset.
    pub const UNIT: BandWidthConstants = BandWidthConstants {
        per_log_inv_delta: 1.0,
        per_log_k: 1.0,
        offset: 0.0,
    };

    /// Fitted to `dpset calibrate` sweeps at `beta = 0.05`, `q = 256`
    /// (nearly every row survives, the hardest load), `k` from `2^10` to
    /// `2^14`. The measured failure rate behaves like
    /// `2^(-5.6) k^0.85 2^(-0.148 w)`; solving for `delta` and rounding
    /// towards wider bands gives these values. `k_hat = 2^12`,
    /// `delta = 2^-40` maps to `w = 302`. Larger `beta` only lowers the
    /// failure rate, smaller `beta` needs its own fit.
    pub const CALIBRATED: BandWidthConstants = BandWidthConstants {
        per_log_inv_delta: 6.75,
        per_log_k: 5.75,
        offset: -37.0,
    };
}

impl Default for BandWidthConstants {
    fn default() -> Self {
        Self::CALIBRATED
    }
}

/// Band width for a set bound `k_hat` and failure budget `delta`, clamped to
/// `[2, m]` (or to `m` when `m < 2`).
pub fn default_band_width(k_hat: usize, delta: f64, m: usize, constants: BandWidthConstants) -> usize {
    let raw = constants.per_log_inv_delta * (1.0 / delta).log2()
        + constants.per_log_k * (k_hat.max(1) as f64).log2();
    let w = raw.ceil() + constants.offset;
    let w = if w.is_finite() && w > 0.0 { w as usize } else { 0 };
    w.max(2).min(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn el(f: &Field, v: u32) -> FieldElement {
        f.element(v).unwrap()
    }

    #[test]
    fn single_row_system() {
        let f = Field::new(FieldSpec::prime(3).unwrap());
        let row = SparseBandRow {
            start: 0,
            coeffs: vec![el(&f, 1), el(&f, 0)],
            rhs: el(&f, 2),
        };
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let out = solve_band(vec![row.clone()], 3, &f, &mut rng).unwrap();
        let x = out.solution.unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(x[0], el(&f, 2));
        assert!(row.is_satisfied_by(&x, &f));
    }

    #[test]
    fn duplicate_rows_fail() {
        let f = Field::new(FieldSpec::binary(2).unwrap());
        let seeds = (HashSeed::new([1; 16]), HashSeed::new([2; 16]));
        let u = UniverseElement::new(b"dup".to_vec());
        let mut row = row_band(&u, &seeds.0, &seeds.1, 10, 4, &f).unwrap();
        row.rhs = el(&f, 3);
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let out = solve_band(vec![row.clone(), row], 10, &f, &mut rng).unwrap();
        assert!(out.solution.is_none());
    }

    #[test]
    fn consistent_dependent_rows_still_fail() {
        let f = Field::new(FieldSpec::prime(5).unwrap());
        let a = SparseBandRow {
            start: 1,
            coeffs: vec![el(&f, 1), el(&f, 2)],
            rhs: el(&f, 3),
        };
        let b = SparseBandRow {
            start: 1,
            coeffs: vec![el(&f, 2), el(&f, 4)],
            rhs: el(&f, 1),
        };
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        assert!(solve_band(vec![a, b], 4, &f, &mut rng).unwrap().solution.is_none());
    }

    #[test]
    fn zero_row_fails() {
        let f = Field::new(FieldSpec::prime(5).unwrap());
        let z = SparseBandRow {
            start: 0,
            coeffs: vec![FieldElement::ZERO; 2],
            rhs: FieldElement::ZERO,
        };
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        assert!(solve_band(vec![z], 4, &f, &mut rng).unwrap().solution.is_none());
    }

    #[test]
    fn rows_may_grow_during_elimination() {
        // Row b starts at the same column as a but is shorter; eliminating
        // with a extends b to a's length.
        let f = Field::new(FieldSpec::prime(7).unwrap());
        let a = SparseBandRow {
            start: 0,
            coeffs: vec![el(&f, 1), el(&f, 3), el(&f, 5)],
            rhs: el(&f, 1),
        };
        let b = SparseBandRow {
            start: 0,
            coeffs: vec![el(&f, 2)],
            rhs: el(&f, 4),
        };
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let out = solve_band(vec![a.clone(), b.clone()], 3, &f, &mut rng).unwrap();
        let x = out.solution.unwrap();
        assert!(a.is_satisfied_by(&x, &f));
        assert!(b.is_satisfied_by(&x, &f));
        assert_eq!(out.eliminations, 1);
    }

    #[test]
    fn rejects_malformed_input() {
        let f = Field::new(FieldSpec::prime(3).unwrap());
        let r = SparseBandRow {
            start: 2,
            coeffs: vec![FieldElement::ONE; 2],
            rhs: FieldElement::ZERO,
        };
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        assert!(matches!(
            solve_band(vec![r.clone()], 3, &f, &mut rng),
            Err(Error::RowOutOfRange { .. })
        ));
        assert!(matches!(
            solve_band(vec![r.clone(), r.clone(), r], 2, &f, &mut rng),
            Err(Error::TooManyRows { .. })
        ));
    }

    #[test]
    fn row_band_shape_and_determinism() {
        let f = Field::new(FieldSpec::binary(2).unwrap());
        let (s1, s2) = (HashSeed::new([9; 16]), HashSeed::new([8; 16]));
        for i in 0..200u32 {
            let u = UniverseElement::from_index(i);
            let r = row_band(&u, &s1, &s2, 6, 6, &f).unwrap();
            assert_eq!(r.start, 0);
            assert_eq!(r.coeffs.len(), 6);
            assert_eq!(r, row_band(&u, &s1, &s2, 6, 6, &f).unwrap());
            let r = row_band(&u, &s1, &s2, 40, 5, &f).unwrap();
            assert!(r.end() <= 40);
        }
    }

    #[test]
    fn free_variables_drawn_in_column_order() {
        // No rows: every column is free, so the solution is exactly the
        // first m uniform draws.
        let f = Field::new(FieldSpec::binary(8).unwrap());
        let mut a = ChaCha20Rng::seed_from_u64(7);
        let mut b = ChaCha20Rng::seed_from_u64(7);
        let x = solve_band(Vec::new(), 12, &f, &mut a).unwrap().solution.unwrap();
        let expect: Vec<_> = (0..12).map(|_| f.uniform_element(&mut b)).collect();
        assert_eq!(x, expect);
    }

    #[test]
    fn band_width_rule() {
        let c = BandWidthConstants::UNIT;
        assert_eq!(default_band_width(1 << 12, 2f64.powi(-40), 1 << 20, c), 52);
        let c = BandWidthConstants::CALIBRATED;
        assert_eq!(default_band_width(1 << 12, 2f64.powi(-40), 1 << 20, c), 302);
        assert_eq!(default_band_width(1 << 16, 2f64.powi(-40), 1 << 20, c), 325);
        assert!(default_band_width(2, 0.5, 100, c) >= 2);
        assert_eq!(default_band_width(2, 0.5, 100, c), 2);
        assert_eq!(default_band_width(1 << 12, 2f64.powi(-40), 30, c), 30);
        let shifted = BandWidthConstants {
            offset: 12.0,
            ..BandWidthConstants::UNIT
        };
        assert_eq!(default_band_width(1 << 12, 2f64.powi(-40), 1 << 20, shifted), 64);
    }

    #[test]
    fn failure_rate_non_increasing_in_width() {
        let f = Field::new(FieldSpec::binary(2).unwrap());
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let (k, m, trials) = (400usize, 420usize, 60);
        let mut rates = Vec::new();
        for w in [2usize, 4, 8, 16, 32] {
            let mut failures = 0;
            for _ in 0..trials {
                let s1 = HashSeed::random(&mut rng);
                let s2 = HashSeed::random(&mut rng);
                let rows: Vec<_> = (0..k)
                    .map(|_| {
                        let mut b = [0u8; 16];
                        rng.fill_bytes(&mut b);
                        row_band(&UniverseElement::new(b.to_vec()), &s1, &s2, m, w, &f).unwrap()
                    })
                    .collect();
                if solve_band(rows, m, &f, &mut rng).unwrap().solution.is_none() {
                    failures += 1;
                }
            }
            rates.push(failures as f64 / trials as f64);
        }
        assert_eq!(rates[0], 1.0);
        for pair in rates.windows(2) {
            assert!(pair[1] <= pair[0], "{rates:?}");
        }
    }
}
