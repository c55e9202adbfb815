//! Keyed hash functions standing in for the fully random `h`, `h1`, `h2`.
//!
//! Each function hashes its input once with SipHash-1-3 (128-bit output)
//! under a 16-byte seed and expands the result in counter mode into a bit
//! stream. Bounded outputs are rejection-sampled from that stream, so every
//! output is exactly uniform whenever the stream bits are.

use std::fmt;
use std::hash::Hasher;

use rand::{CryptoRng, RngCore};
use siphasher::sip128::{Hasher128, SipHasher13};

use crate::error::Error;
use crate::field::{bits_for, mask_for, Field, FieldElement};

pub const SEED_LEN: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct HashSeed([u8; SEED_LEN]);

impl HashSeed {
    pub const ZERO: HashSeed = HashSeed([0; SEED_LEN]);

    pub fn new(bytes: [u8; SEED_LEN]) -> Self {
        HashSeed(bytes)
    }

    pub fn random<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Self {
        let mut bytes = [0u8; SEED_LEN];
        rng.fill_bytes(&mut bytes);
        HashSeed(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; SEED_LEN] {
        &self.0
    }
}

impl fmt::Debug for HashSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HashSeed(")?;
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// An opaque member of the universe. Equality is byte-wise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniverseElement(Vec<u8>);

impl UniverseElement {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Self {
        UniverseElement(bytes.into())
    }

    /// Little-endian 4-byte representation of an integer; the form used for
    /// field-valued universes.
    pub fn from_index(v: u32) -> Self {
        UniverseElement(v.to_le_bytes().to_vec())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Interprets the bytes as a little-endian unsigned integer. Returns
    /// `None` when the value does not fit in 32 bits.
    pub fn as_index(&self) -> Option<u32> {
        let significant = self.0.iter().rposition(|&b| b != 0).map_or(0, |i| i + 1);
        if significant > 4 {
            return None;
        }
        let mut buf = [0u8; 4];
        buf[..significant].copy_from_slice(&self.0[..significant]);
        Some(u32::from_le_bytes(buf))
    }
}

impl From<&[u8]> for UniverseElement {
    fn from(b: &[u8]) -> Self {
        UniverseElement(b.to_vec())
    }
}

impl From<Vec<u8>> for UniverseElement {
    fn from(b: Vec<u8>) -> Self {
        UniverseElement(b)
    }
}

/// Pseudorandom bit stream keyed by a seed and bound to one input.
#[derive(Clone)]
pub struct PrfStream {
    keyed: SipHasher13,
    counter: u64,
    buf: u128,
    avail: u32,
}

impl PrfStream {
    pub fn new(seed: &HashSeed, input: &[u8]) -> Self {
        let mut keyed = SipHasher13::new_with_key(seed.as_bytes());
        keyed.write(&(input.len() as u64).to_le_bytes());
        keyed.write(input);
        PrfStream {
            keyed,
            counter: 0,
            buf: 0,
            avail: 0,
        }
    }

    fn next_block(&mut self) -> u128 {
        let mut h = self.keyed;
        h.write(&self.counter.to_le_bytes());
        self.counter += 1;
        h.finish128().as_u128()
    }

    /// Next `bits` (at most 32) bits of the stream.
    pub fn take_bits(&mut self, bits: u32) -> u32 {
        debug_assert!(bits <= 32);
        if bits == 0 {
            return 0;
        }
        if self.avail < bits {
            self.buf = self.next_block();
            self.avail = 128;
        }
        let v = (self.buf as u32) & mask_for(bits);
        self.buf >>= bits;
        self.avail -= bits;
        v
    }

    /// Uniform integer in `[0, n)` for `1 <= n <= 2^32`.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!((1..=1 << 32).contains(&n));
        if n == 1 {
            return 0;
        }
        let bits = if n == 1 << 32 { 32 } else { bits_for(n as u32) };
        loop {
            let v = self.take_bits(bits) as u64;
            if v < n {
                return v;
            }
        }
    }
}

/// `h: U -> F`.
pub fn hash_to_field(seed: &HashSeed, u: &UniverseElement, field: &Field) -> FieldElement {
    let mut s = PrfStream::new(seed, u.as_bytes());
    FieldElement::from_raw(s.below(field.order() as u64) as u32)
}

/// `h1: U -> [0, m - w]`, the 0-based first column of the band.
pub fn hash_band_start(seed: &HashSeed, u: &UniverseElement, m: usize, w: usize) -> Result<usize, Error> {
    if w == 0 || w > m {
        return Err(Error::BandWidth { w, m });
    }
    let positions = (m - w + 1) as u64;
    if positions > 1 << 32 {
        return Err(Error::BandWidth { w, m });
    }
    let mut s = PrfStream::new(seed, u.as_bytes());
    Ok(s.below(positions) as usize)
}

/// `h2: U -> F^w`, the band coefficients. Zero entries are allowed anywhere.
pub fn hash_band_values(seed: &HashSeed, u: &UniverseElement, w: usize, field: &Field) -> Vec<FieldElement> {
    let mut s = PrfStream::new(seed, u.as_bytes());
    let q = field.order() as u64;
    (0..w)
        .map(|_| FieldElement::from_raw(s.below(q) as u32))
        .collect()
}
