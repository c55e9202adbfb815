//! Band and Vandermonde solvers against dense Gaussian elimination with
//! independently implemented arithmetic for the small fields.

use dpset_core::vandermonde::evaluate;
use dpset_core::{solve_band, solve_vdm, Field, FieldSpec, SparseBandRow, VdmPoint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// GF(4) over `x^2 + x + 1`; elements `0, 1, x, x + 1` encoded as 0..4.
const GF4_MUL: [[u32; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

struct Small(u32);

impl Small {
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.0 == 4 {
            a ^ b
        } else {
            (a + b) % self.0
        }
    }
    fn neg(&self, a: u32) -> u32 {
        if self.0 == 4 {
            a
        } else {
            (self.0 - a) % self.0
        }
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.0 == 4 {
            GF4_MUL[a as usize][b as usize]
        } else {
            a * b % self.0
        }
    }
    fn inv(&self, a: u32) -> u32 {
        (1..self.0).find(|&b| self.mul(a, b) == 1).expect("nonzero")
    }
}

/// Rank of a dense matrix by row reduction.
fn rank(f: &Small, mut rows: Vec<Vec<u32>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                let pivot_row = rows[r].clone();
                for (v, &pv) in rows[i].iter_mut().zip(&pivot_row) {
                    *v = f.add(*v, f.neg(f.mul(factor, pv)));
                }
            }
        }
        r += 1;
    }
    r
}

fn dense_row(row: &SparseBandRow, m: usize) -> Vec<u32> {
    let mut d = vec![0; m];
    for (i, c) in row.coeffs.iter().enumerate() {
        d[row.start + i] = c.value();
    }
    d
}

fn spec(q: u32) -> FieldSpec {
    if q.is_power_of_two() {
        FieldSpec::binary(q.trailing_zeros() as u8).unwrap()
    } else {
        FieldSpec::prime(q).unwrap()
    }
}

/// `(start, coefficients, rhs)` as raw values.
type RawRow = (usize, Vec<u32>, u32);

fn band_instance() -> impl Strategy<Value = (u32, usize, Vec<RawRow>)> {
    (prop::sample::select(vec![2u32, 3, 4, 5, 7]), 1usize..=8).prop_flat_map(|(q, m)| {
        let row = (1usize..=m).prop_flat_map(move |w| {
            (0..=m - w, prop::collection::vec(0..q, w), 0..q)
        });
        (Just(q), Just(m), prop::collection::vec(row, 0..=m.min(5)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn band_solver_matches_dense_rank((q, m, raw) in band_instance(), seed in any::<u64>()) {
        let field = Field::new(spec(q));
        let rows: Vec<SparseBandRow> = raw
            .iter()
            .map(|(start, coeffs, rhs)| SparseBandRow {
                start: *start,
                coeffs: coeffs.iter().map(|&v| field.element(v).unwrap()).collect(),
                rhs: field.element(*rhs).unwrap(),
            })
            .collect();
        let dense: Vec<Vec<u32>> = rows.iter().map(|r| dense_row(r, m)).collect();
        let full_rank = rank(&Small(q), dense) == rows.len();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let out = solve_band(rows.clone(), m, &field, &mut rng).unwrap();
        prop_assert_eq!(out.solution.is_some(), full_rank);
        if let Some(x) = out.solution {
            prop_assert_eq!(x.len(), m);
            for r in &rows {
                prop_assert!(r.is_satisfied_by(&x, &field));
            }
        }
    }

    #[test]
    fn vandermonde_solver_is_total((q, k, us, rhs) in vdm_instance(), seed in any::<u64>()) {
        let field = Field::new(spec(q));
        let points: Vec<VdmPoint> = us
            .iter()
            .zip(&rhs)
            .map(|(&u, &r)| VdmPoint {
                u: field.element(u).unwrap(),
                rhs: field.element(r).unwrap(),
            })
            .collect();
        let dense: Vec<Vec<u32>> = us
            .iter()
            .map(|&u| (0..k).map(|j| field.pow(field.element(u).unwrap(), j as u64).value()).collect())
            .collect();
        prop_assert_eq!(rank(&Small(q), dense), points.len());
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x = solve_vdm(&points, k, &field, &mut rng).unwrap();
        prop_assert_eq!(x.len(), k);
        for p in &points {
            prop_assert_eq!(evaluate(&x, p.u, &field), p.rhs);
        }
    }
}

fn vdm_instance() -> impl Strategy<Value = (u32, usize, Vec<u32>, Vec<u32>)> {
    prop::sample::select(vec![2u32, 3, 4, 5, 7])
        .prop_flat_map(|q| (Just(q), 1..=q as usize))
        .prop_flat_map(|(q, k)| {
            let us = prop::sample::subsequence((0..q).collect::<Vec<_>>(), 0..=k).prop_shuffle();
            (Just(q), Just(k), us, prop::collection::vec(0..q, k))
        })
}

#[test]
fn oracle_arithmetic_agrees_with_library() {
    for q in [2u32, 3, 4, 5, 7] {
        let f = Field::new(spec(q));
        let s = Small(q);
        for a in 0..q {
            for b in 0..q {
                let (fa, fb) = (f.element(a).unwrap(), f.element(b).unwrap());
                assert_eq!(f.mul(fa, fb).value(), s.mul(a, b));
                assert_eq!(f.add(fa, fb).value(), s.add(a, b));
            }
        }
    }
}
