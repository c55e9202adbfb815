//! Small finite fields used as encoding alphabets.
//!
//! Two families are supported: prime fields `F_q` (modular arithmetic) and
//! binary extension fields `GF(2^r)` for `1 <= r <= 16` (log/antilog tables).
//! Every binary degree has exactly one reduction polynomial, listed in
//! [`REDUCTION_POLYNOMIALS`]; changing that table changes the wire format.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::RngCore;

use crate::error::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Canonical primitive reduction polynomial for each degree `r` (index `r`),
/// with the `x^r` term included. Index 0 is unused.
pub const REDUCTION_POLYNOMIALS: [u32; 17] = [
    0,
    0x3,     // x + 1
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x83,    // x^7 + x + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    BinaryExtension,
}

impl FieldKind {
    pub fn code(self) -> u8 {
        match self {
            FieldKind::Prime => 0,
            FieldKind::BinaryExtension => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(FieldKind::Prime),
            1 => Some(FieldKind::BinaryExtension),
            _ => None,
        }
    }
}

/// Description of a concrete finite field: its family and order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    kind: FieldKind,
    order: u32,
    degree: u8,
}

impl FieldSpec {
    /// The prime field of order `q`.
    pub fn prime(q: u32) -> Result<Self, Error> {
        if q > MAX_ORDER || !is_prime(q) {
            return Err(Error::UnsupportedOrder(q));
        }
        Ok(FieldSpec {
            kind: FieldKind::Prime,
            order: q,
            degree: 1,
        })
    }

    /// The binary extension field `GF(2^r)`.
    pub fn binary(r: u8) -> Result<Self, Error> {
        if !(1..=16).contains(&r) {
            return Err(Error::UnsupportedDegree(r));
        }
        Ok(FieldSpec {
            kind: FieldKind::BinaryExtension,
            order: 1 << r,
            degree: r,
        })
    }

    /// Rebuilds a spec from its wire representation (kind and order).
    pub fn from_parts(kind: FieldKind, order: u32) -> Result<Self, Error> {
        match kind {
            FieldKind::Prime => Self::prime(order),
            FieldKind::BinaryExtension => {
                if order.is_power_of_two() && (2..=MAX_ORDER).contains(&order) {
                    Self::binary(order.trailing_zeros() as u8)
                } else {
                    Err(Error::UnsupportedOrder(order))
                }
            }
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// Field order `q`, i.e. `|F|`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Extension degree `r` (1 for prime fields).
    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// Reduction polynomial for binary fields; `None` for prime fields.
    pub fn reduction_polynomial(&self) -> Option<u32> {
        match self.kind {
            FieldKind::Prime => None,
            FieldKind::BinaryExtension => Some(REDUCTION_POLYNOMIALS[self.degree as usize]),
        }
    }

    /// Bits needed to store one element: `ceil(log2 q)`.
    pub fn bits_per_element(&self) -> u32 {
        bits_for(self.order)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Prime => write!(f, "F_{}", self.order),
            FieldKind::BinaryExtension => write!(f, "GF(2^{})", self.degree),
        }
    }
}

/// Picks the smallest supported field whose order is at least `1/alpha_target`.
///
/// Primes and powers of two are both searched; the only order in both
/// families is 2, which resolves to `GF(2^1)`. A relative slack of `1e-9`
/// absorbs rounding in `1/alpha_target`, so `alpha_target = 1/(e^{ln 2} + 1)`
/// still yields `q = 3`.
pub fn select_field(alpha_target: f64) -> Result<FieldSpec, Error> {
    if !(alpha_target > 0.0 && alpha_target <= 0.5) {
        return Err(Error::AlphaOutOfRange(alpha_target));
    }
    let threshold = 1.0 / alpha_target;
    let needed = (threshold * (1.0 - 1e-9)).ceil().max(2.0);
    if needed > MAX_ORDER as f64 {
        return Err(Error::AlphaOutOfRange(alpha_target));
    }
    let mut q = needed as u32;
    loop {
        if q.is_power_of_two() {
            return FieldSpec::binary(q.trailing_zeros() as u8);
        }
        if is_prime(q) {
            return FieldSpec::prime(q);
        }
        q += 1;
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `ceil(log2 n)`; 0 for `n <= 1`.
pub(crate) fn bits_for(n: u32) -> u32 {
    if n <= 1 {
        0
    } else {
        32 - (n - 1).leading_zeros()
    }
}

/// An element of some field, stored as its canonical integer in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u32 {
        self.0 as u32
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    // Caller guarantees v < q.
    #[inline]
    pub(crate) fn from_raw(v: u32) -> Self {
        debug_assert!(v < MAX_ORDER);
        FieldElement(v as u16)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct LogTables {
    // exp has 2(q-1) entries so log sums never need reducing.
    exp: Vec<u16>,
    log: Vec<u32>,
}

impl LogTables {
    fn build(degree: u8) -> Self {
        let order = 1usize << degree;
        let poly = REDUCTION_POLYNOMIALS[degree as usize];
        let group = order - 1;
        let mut exp = vec![0u16; 2 * group];
        let mut log = vec![0u32; order];
        let mut v: u32 = 1;
        for i in 0..group {
            exp[i] = v as u16;
            exp[i + group] = v as u16;
            log[v as usize] = i as u32;
            v <<= 1;
            if v & (order as u32) != 0 {
                v ^= poly;
            }
        }
        LogTables { exp, log }
    }
}

fn tables_for(degree: u8) -> Arc<LogTables> {
    static CACHE: [OnceLock<Arc<LogTables>>; 17] = [const { OnceLock::new() }; 17];
    CACHE[degree as usize]
        .get_or_init(|| Arc::new(LogTables::build(degree)))
        .clone()
}

#[derive(Debug, Clone)]
enum Arith {
    Prime { q: u32 },
    Binary { tables: Arc<LogTables>, group: u32 },
}

/// Arithmetic context for one [`FieldSpec`]. Cheap to clone; tables are shared.
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    arith: Arith,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let arith = match spec.kind {
            FieldKind::Prime => Arith::Prime { q: spec.order },
            FieldKind::BinaryExtension => Arith::Binary {
                tables: tables_for(spec.degree),
                group: spec.order - 1,
            },
        };
        Field { spec, arith }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn order(&self) -> u32 {
        self.spec.order
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Checked conversion from an integer.
    pub fn element(&self, value: u32) -> Result<FieldElement, Error> {
        if value < self.spec.order {
            Ok(FieldElement::from_raw(value))
        } else {
            Err(Error::NotAnElement {
                value,
                order: self.spec.order,
            })
        }
    }

    /// Iterates over every element in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.spec.order).map(FieldElement::from_raw)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.arith {
            Arith::Prime { q } => {
                let s = a.value() + b.value();
                FieldElement::from_raw(if s >= q { s - q } else { s })
            }
            Arith::Binary { .. } => FieldElement(a.0 ^ b.0),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.arith {
            Arith::Prime { q } => {
                let (a, b) = (a.value(), b.value());
                FieldElement::from_raw(if a >= b { a - b } else { a + q - b })
            }
            Arith::Binary { .. } => FieldElement(a.0 ^ b.0),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, a)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.arith {
            Arith::Prime { q } => FieldElement::from_raw(a.value() * b.value() % q),
            Arith::Binary { tables, .. } => {
                if a.0 == 0 || b.0 == 0 {
                    return FieldElement::ZERO;
                }
                let l = tables.log[a.0 as usize] + tables.log[b.0 as usize];
                FieldElement(tables.exp[l as usize])
            }
        }
    }

    /// Multiplicative inverse; `inv(0)` is an error.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, Error> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.arith {
            Arith::Prime { q } => FieldElement::from_raw(mod_inverse(a.value(), *q)),
            Arith::Binary { tables, group } => {
                let l = tables.log[a.0 as usize];
                FieldElement(tables.exp[((group - l) % group) as usize])
            }
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, Error> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `sum a[i] * b[i]` over the common prefix.
    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        match &self.arith {
            Arith::Prime { q } => {
                // q < 2^16, so each product is < 2^32; reduce before adding.
                let mut acc = 0u64;
                for (x, y) in a.iter().zip(b) {
                    acc += (x.value() * y.value() % q) as u64;
                }
                FieldElement::from_raw((acc % *q as u64) as u32)
            }
            Arith::Binary { .. } => a
                .iter()
                .zip(b)
                .fold(FieldElement::ZERO, |acc, (&x, &y)| {
                    FieldElement(acc.0 ^ self.mul(x, y).0)
                }),
        }
    }

    /// `dst[i] -= factor * src[i]` for every `i < src.len()`.
    pub(crate) fn sub_scaled(&self, dst: &mut [FieldElement], factor: FieldElement, src: &[FieldElement]) {
        debug_assert!(dst.len() >= src.len());
        if factor.is_zero() {
            return;
        }
        match &self.arith {
            Arith::Prime { q } => {
                let f = factor.value();
                for (d, s) in dst.iter_mut().zip(src) {
                    let prod = f * s.value() % q;
                    let v = d.value();
                    *d = FieldElement::from_raw(if v >= prod { v - prod } else { v + q - prod });
                }
            }
            Arith::Binary { tables, .. } => {
                let lf = tables.log[factor.0 as usize];
                for (d, s) in dst.iter_mut().zip(src) {
                    if s.0 != 0 {
                        d.0 ^= tables.exp[(lf + tables.log[s.0 as usize]) as usize];
                    }
                }
            }
        }
    }

    pub(crate) fn scale_in_place(&self, v: &mut [FieldElement], factor: FieldElement) {
        for x in v.iter_mut() {
            *x = self.mul(*x, factor);
        }
    }

    /// Uniform element drawn by rejection on `ceil(log2 q)`-bit words.
    pub fn uniform_element<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement::from_raw(uniform_below(rng, self.spec.order))
    }
}

/// Uniform integer in `[0, n)` for `n >= 1`, by rejection on `ceil(log2 n)`-bit words.
pub(crate) fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, n: u32) -> u32 {
    debug_assert!(n >= 1);
    let mask = mask_for(bits_for(n));
    loop {
        let v = rng.next_u32() & mask;
        if v < n {
            return v;
        }
    }
}

pub(crate) fn mask_for(bits: u32) -> u32 {
    if bits >= 32 {
        u32::MAX
    } else {
        (1u32 << bits) - 1
    }
}

fn mod_inverse(a: u32, q: u32) -> u32 {
    let (mut old_r, mut r) = (a as i64, q as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    old_s.rem_euclid(q as i64) as u32
}
