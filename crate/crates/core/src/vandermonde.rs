//! Vandermonde systems, solved by polynomial interpolation.
//!
//! A solution `x` of `[1, u, .., u^{k-1}] . x = y` for points `(u_i, y_i)` is
//! the coefficient vector of a polynomial `P` of degree `< k` with
//! `P(u_i) = y_i`. With `Q` the interpolant and `Z = prod (X - u_i)`, the full
//! solution set is `{ Q + R Z : deg R < k - k' }`; drawing `R` uniformly
//! samples that set uniformly. The system is full rank for distinct points,
//! so solving never fails.

use std::collections::HashSet;

use rand::RngCore;

use crate::error::Error;
use crate::field::{Field, FieldElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VdmPoint {
    pub u: FieldElement,
    pub rhs: FieldElement,
}

/// `[1, u, u^2, .., u^{k-1}]`.
pub fn row_vdm(u: FieldElement, k: usize, field: &Field) -> Vec<FieldElement> {
    let mut row = Vec::with_capacity(k);
    let mut acc = FieldElement::ONE;
    for _ in 0..k {
        row.push(acc);
        acc = field.mul(acc, u);
    }
    row
}

/// Horner evaluation of `sum coeffs[j] u^j`.
pub fn evaluate(coeffs: &[FieldElement], u: FieldElement, field: &Field) -> FieldElement {
    coeffs
        .iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &c| field.add(field.mul(acc, u), c))
}

/// Returns a uniformly random `x` of length `k` with `row_vdm(u_i, k) . x =
/// rhs_i` for every point. Needs distinct `u_i`, `points.len() <= k <= q`.
pub fn solve_vdm<R: RngCore + ?Sized>(
    points: &[VdmPoint],
    k: usize,
    field: &Field,
    rng: &mut R,
) -> Result<Vec<FieldElement>, Error> {
    if points.len() > k || k > field.order() as usize {
        return Err(Error::VandermondeShape {
            points: points.len(),
            columns: k,
            order: field.order(),
        });
    }
    let mut seen = HashSet::with_capacity(points.len());
    for p in points {
        if !seen.insert(p.u) {
            return Err(Error::DuplicatePoint(p.u.value()));
        }
    }

    // Newton-form interpolation: after point j, `interp` matches points
    // 0..=j and `vanishing` = prod_{i<=j} (X - u_i).
    let mut interp: Vec<FieldElement> = Vec::with_capacity(k);
    let mut vanishing: Vec<FieldElement> = Vec::with_capacity(points.len() + 1);
    vanishing.push(FieldElement::ONE);
    for p in points {
        let current = evaluate(&interp, p.u, field);
        let basis_at_u = evaluate(&vanishing, p.u, field);
        let c = field.div(field.sub(p.rhs, current), basis_at_u)?;
        if interp.len() < vanishing.len() {
            interp.resize(vanishing.len(), FieldElement::ZERO);
        }
        for (dst, &v) in interp.iter_mut().zip(&vanishing) {
            *dst = field.add(*dst, field.mul(c, v));
        }
        // vanishing *= (X - u)
        let neg_u = field.neg(p.u);
        vanishing.push(FieldElement::ZERO);
        for j in (0..vanishing.len()).rev() {
            let shifted = if j > 0 { vanishing[j - 1] } else { FieldElement::ZERO };
            vanishing[j] = field.add(shifted, field.mul(neg_u, vanishing[j]));
        }
    }

    let mut x = interp;
    x.resize(k, FieldElement::ZERO);
    let free = k - points.len();
    let multiplier: Vec<FieldElement> = (0..free).map(|_| field.uniform_element(rng)).collect();
    for (i, &r) in multiplier.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        for (j, &z) in vanishing.iter().enumerate() {
            x[i + j] = field.add(x[i + j], field.mul(r, z));
        }
    }
    Ok(x)
}
