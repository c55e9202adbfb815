//! Binary `.dpset` format.
//!
//! ```text
//! magic "DPST"       4
//! version            u8 (= 1)
//! mode               u8 (0 band, 1 vandermonde, 2 trivial)
//! field kind         u8 (0 prime, 1 binary extension)
//! q, m, w, k_hat     u32 each
//! h, h1, h2 seeds    16 bytes each (zero when unused)
//! payload tag        u8 (0 solution, 1 fallback)
//! payload
//! ```
//!
//! Multi-byte integers are little-endian. A solution payload is `m` elements
//! of `ceil(log2 q)` bits each, packed LSB-first and zero-padded to a byte.
//! A fallback payload is a u32 count followed by `len: u16, bytes` records.

use thiserror::Error;

use crate::encoding::{Encoding, EncodingParams, Payload, Seeds};
use crate::field::{FieldElement, FieldKind, FieldSpec};
use crate::hashing::{HashSeed, UniverseElement, SEED_LEN};
use crate::params::Mode;

pub const MAGIC: [u8; 4] = *b"DPST";
pub const VERSION: u8 = 1;
/// Bytes before the payload body, payload tag included.
pub const HEADER_LEN: usize = 4 + 3 + 4 * 4 + 3 * SEED_LEN + 1;

const TAG_SOLUTION: u8 = 0;
const TAG_FALLBACK: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("buffer ends inside `{field}`")]
    Truncated { field: &'static str },
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown mode {0}")]
    BadMode(u8),
    #[error("unknown field kind {0}")]
    BadFieldKind(u8),
    #[error("field order {0} is not valid for its kind")]
    BadFieldOrder(u32),
    #[error("unknown payload tag {0}")]
    BadPayloadTag(u8),
    #[error("solution element {index} has value {value}, outside the field")]
    ElementOutOfRange { index: usize, value: u32 },
    #[error("nonzero padding bits after the solution vector")]
    NonZeroPadding,
    #[error("{0} unexpected bytes after the payload")]
    TrailingBytes(usize),
    #[error("inconsistent `{field}`: {reason}")]
    Inconsistent { field: &'static str, reason: String },
}

/// Packed size of an `m`-element solution over a field of order `q`.
pub fn solution_payload_len(m: usize, field: FieldSpec) -> usize {
    (m * field.bits_per_element() as usize).div_ceil(8)
}

pub fn serialize(enc: &Encoding) -> Vec<u8> {
    let p = enc.params();
    let mut out = Vec::with_capacity(HEADER_LEN + payload_len(enc));
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(p.mode.code());
    out.push(p.field.kind().code());
    for v in [p.field.order() as usize, p.m, p.w, p.k_hat] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    let s = enc.seeds();
    for seed in [&s.h, &s.h1, &s.h2] {
        out.extend_from_slice(seed.as_bytes());
    }
    match enc.payload() {
        Payload::Solution(x) => {
            out.push(TAG_SOLUTION);
            pack(&mut out, x, p.field.bits_per_element());
        }
        Payload::Fallback(set) => {
            out.push(TAG_FALLBACK);
            out.extend_from_slice(&(set.len() as u32).to_le_bytes());
            for e in set {
                out.extend_from_slice(&(e.len() as u16).to_le_bytes());
                out.extend_from_slice(e.as_bytes());
            }
        }
    }
    out
}

fn payload_len(enc: &Encoding) -> usize {
    match enc.payload() {
        Payload::Solution(x) => solution_payload_len(x.len(), enc.params().field),
        Payload::Fallback(set) => 4 + set.iter().map(|e| 2 + e.len()).sum::<usize>(),
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<Encoding, ParseError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    let magic: [u8; 4] = r.take(4, "magic")?.try_into().unwrap();
    if magic != MAGIC {
        return Err(ParseError::BadMagic(magic));
    }
    let version = r.u8("version")?;
    if version != VERSION {
        return Err(ParseError::UnsupportedVersion(version));
    }
    let mode_code = r.u8("mode")?;
    let mode = Mode::from_code(mode_code).ok_or(ParseError::BadMode(mode_code))?;
    let kind_code = r.u8("field kind")?;
    let kind = FieldKind::from_code(kind_code).ok_or(ParseError::BadFieldKind(kind_code))?;
    let q = r.u32("q")?;
    let field = FieldSpec::from_parts(kind, q).map_err(|_| ParseError::BadFieldOrder(q))?;
    let m = r.u32("m")? as usize;
    let w = r.u32("w")? as usize;
    let k_hat = r.u32("k_hat")? as usize;
    let h = r.seed("h_seed")?;
    let h1 = r.seed("h1_seed")?;
    let h2 = r.seed("h2_seed")?;
    let tag = r.u8("payload tag")?;
    let payload = match tag {
        TAG_SOLUTION => {
            let len = solution_payload_len(m, field);
            let body = r.take(len, "solution")?;
            Payload::Solution(unpack(body, m, field)?)
        }
        TAG_FALLBACK => {
            let count = r.u32("fallback count")? as usize;
            // Each record needs at least its two length bytes.
            if count > r.remaining() / 2 {
                return Err(ParseError::Truncated { field: "fallback element" });
            }
            let mut set = Vec::with_capacity(count);
            for _ in 0..count {
                let len = r.u16("fallback element length")? as usize;
                set.push(UniverseElement::from(r.take(len, "fallback element")?));
            }
            Payload::Fallback(set)
        }
        other => return Err(ParseError::BadPayloadTag(other)),
    };
    if r.remaining() != 0 {
        return Err(ParseError::TrailingBytes(r.remaining()));
    }
    let params = EncodingParams {
        mode,
        field,
        m,
        w,
        k_hat,
    };
    Encoding::from_parts(params, Seeds { h, h1, h2 }, payload).map_err(|e| ParseError::Inconsistent {
        field: "header",
        reason: e.to_string(),
    })
}

impl Encoding {
    pub fn to_bytes(&self) -> Vec<u8> {
        serialize(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ParseError> {
        deserialize(bytes)
    }

    /// Size of the serialized object.
    pub fn serialized_len(&self) -> usize {
        HEADER_LEN + payload_len(self)
    }

    /// Size of the packed solution vector alone (0 for fallbacks).
    pub fn solution_bytes(&self) -> usize {
        match self.payload() {
            Payload::Solution(x) => solution_payload_len(x.len(), self.params().field),
            Payload::Fallback(_) => 0,
        }
    }
}

fn pack(out: &mut Vec<u8>, x: &[FieldElement], bits: u32) {
    let mut acc: u64 = 0;
    let mut filled = 0u32;
    for e in x {
        acc |= (e.value() as u64) << filled;
        filled += bits;
        while filled >= 8 {
            out.push(acc as u8);
            acc >>= 8;
            filled -= 8;
        }
    }
    if filled > 0 {
        out.push(acc as u8);
    }
}

fn unpack(body: &[u8], m: usize, field: FieldSpec) -> Result<Vec<FieldElement>, ParseError> {
    let bits = field.bits_per_element();
    let mask = (1u64 << bits) - 1;
    let mut x = Vec::with_capacity(m);
    let mut acc: u64 = 0;
    let mut avail = 0u32;
    let mut bytes = body.iter();
    for index in 0..m {
        while avail < bits {
            acc |= (*bytes.next().expect("length checked by caller") as u64) << avail;
            avail += 8;
        }
        let value = (acc & mask) as u32;
        acc >>= bits;
        avail -= bits;
        if value >= field.order() {
            return Err(ParseError::ElementOutOfRange { index, value });
        }
        x.push(FieldElement::from_raw(value));
    }
    if acc != 0 {
        return Err(ParseError::NonZeroPadding);
    }
    Ok(x)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn take(&mut self, n: usize, field: &'static str) -> Result<&'a [u8], ParseError> {
        if self.remaining() < n {
            return Err(ParseError::Truncated { field });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, field: &'static str) -> Result<u8, ParseError> {
        Ok(self.take(1, field)?[0])
    }

    fn u16(&mut self, field: &'static str) -> Result<u16, ParseError> {
        Ok(u16::from_le_bytes(self.take(2, field)?.try_into().unwrap()))
    }

    fn u32(&mut self, field: &'static str) -> Result<u32, ParseError> {
        Ok(u32::from_le_bytes(self.take(4, field)?.try_into().unwrap()))
    }

    fn seed(&mut self, field: &'static str) -> Result<HashSeed, ParseError> {
        Ok(HashSeed::new(self.take(SEED_LEN, field)?.try_into().unwrap()))
    }
}
