//! Encoding and decoding of sets.
//!
//! `encode` keeps each input element with probability `1 - p`, binds every
//! survivor `s` to the linear constraint `Row(s) . x = h(s)`, and releases
//! the solved vector `x` together with the hash seeds. `decode(u)` reports
//! whether `u`'s constraint holds.
//!
//! When the band solver fails, the encoding carries the input set in the
//! clear. That is the `delta` event of the privacy guarantee: such an
//! encoding offers no privacy at all, and callers who cannot tolerate it
//! must pick a `delta` small enough that it never happens in practice.

use std::collections::HashSet;

use rand::{CryptoRng, RngCore};

use crate::band::{row_band, solve_band};
use crate::error::Error;
use crate::field::{uniform_below, Field, FieldElement, FieldSpec};
use crate::hashing::{hash_to_field, HashSeed, UniverseElement};
use crate::params::{Mode, Params};
use crate::vandermonde::{evaluate, solve_vdm, VdmPoint};

/// The parameters carried inside a released encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingParams {
    pub mode: Mode,
    pub field: FieldSpec,
    pub m: usize,
    pub w: usize,
    pub k_hat: usize,
}

impl EncodingParams {
    pub fn alpha(&self) -> f64 {
        match self.mode {
            Mode::Trivial => 0.5,
            _ => 1.0 / self.field.order() as f64,
        }
    }

    pub fn epsilon_achieved(&self) -> f64 {
        match self.mode {
            Mode::Trivial => 0.0,
            _ => ((self.field.order() - 1) as f64).ln(),
        }
    }

    fn validate(&self) -> Result<(), Error> {
        let invalid = |reason: &str| {
            Err(Error::InvalidParameter {
                name: "encoding",
                reason: reason.into(),
            })
        };
        match self.mode {
            Mode::Band if self.w == 0 || self.w > self.m => Err(Error::BandWidth { w: self.w, m: self.m }),
            Mode::Vandermonde if self.w != 0 => invalid("vandermonde encodings have no band width"),
            Mode::Vandermonde if self.m > self.field.order() as usize => {
                invalid("vandermonde length exceeds the field order")
            }
            Mode::Trivial if self.m != 0 || self.w != 0 => invalid("trivial encodings have no vector"),
            Mode::Trivial if self.field.order() != 2 => invalid("trivial encodings hash into GF(2)"),
            _ => Ok(()),
        }
    }
}

impl From<&Params> for EncodingParams {
    fn from(p: &Params) -> Self {
        EncodingParams {
            mode: p.mode(),
            field: p.field(),
            m: p.m(),
            w: p.w(),
            k_hat: p.k_hat(),
        }
    }
}

/// Seeds of `h` (right-hand sides), `h1` (band start) and `h2` (band values).
/// `h1` and `h2` are zero outside band mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Seeds {
    pub h: HashSeed,
    pub h1: HashSeed,
    pub h2: HashSeed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Solution(Vec<FieldElement>),
    /// The raw input set, released because the solver failed.
    Fallback(Vec<UniverseElement>),
}

/// A released set representation. Immutable; decoding never mutates it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    params: EncodingParams,
    seeds: Seeds,
    payload: Payload,
    field: Field,
}

/// Result of a decode plus the number of solution coordinates it read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeTrace {
    pub answer: bool,
    pub coordinates_read: usize,
}

/// One membership query and its outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub queried: UniverseElement,
    pub truth: bool,
    pub answer: bool,
}

impl TrialOutcome {
    pub fn is_error(&self) -> bool {
        self.truth != self.answer
    }
}

impl Encoding {
    /// Assembles an encoding from its parts, checking that they agree.
    pub fn from_parts(params: EncodingParams, seeds: Seeds, payload: Payload) -> Result<Self, Error> {
        params.validate()?;
        let field = Field::new(params.field);
        match &payload {
            Payload::Solution(x) => {
                if x.len() != params.m {
                    return Err(Error::InvalidParameter {
                        name: "solution",
                        reason: format!("length {} differs from m = {}", x.len(), params.m),
                    });
                }
                if let Some(bad) = x.iter().find(|e| e.value() >= params.field.order()) {
                    return Err(Error::NotAnElement {
                        value: bad.value(),
                        order: params.field.order(),
                    });
                }
            }
            Payload::Fallback(set) => {
                if params.mode != Mode::Band {
                    return Err(Error::InvalidParameter {
                        name: "payload",
                        reason: format!("{} encodings never fall back", params.mode),
                    });
                }
                if let Some(index) = set.iter().position(|e| e.len() > u16::MAX as usize) {
                    return Err(Error::ElementTooLong { index });
                }
            }
        }
        Ok(Encoding {
            params,
            seeds,
            payload,
            field,
        })
    }

    pub fn params(&self) -> &EncodingParams {
        &self.params
    }

    pub fn seeds(&self) -> &Seeds {
        &self.seeds
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_fallback(&self) -> bool {
        matches!(self.payload, Payload::Fallback(_))
    }

    pub fn solution(&self) -> Option<&[FieldElement]> {
        match &self.payload {
            Payload::Solution(x) => Some(x),
            Payload::Fallback(_) => None,
        }
    }

    pub fn decode(&self, u: &UniverseElement) -> bool {
        self.decode_traced(u).answer
    }

    pub fn decode_traced(&self, u: &UniverseElement) -> DecodeTrace {
        let x = match &self.payload {
            Payload::Fallback(set) => {
                return DecodeTrace {
                    answer: set.contains(u),
                    coordinates_read: 0,
                }
            }
            Payload::Solution(x) => x,
        };
        match self.params.mode {
            Mode::Trivial => DecodeTrace {
                answer: hash_to_field(&self.seeds.h, u, &self.field).is_zero(),
                coordinates_read: 0,
            },
            Mode::Band => {
                let row = row_band(u, &self.seeds.h1, &self.seeds.h2, self.params.m, self.params.w, &self.field)
                    .expect("band parameters validated at construction");
                let y = row.eval(x, &self.field);
                DecodeTrace {
                    answer: y == hash_to_field(&self.seeds.h, u, &self.field),
                    coordinates_read: row.coeffs.len(),
                }
            }
            Mode::Vandermonde => match u.as_index().and_then(|v| self.field.element(v).ok()) {
                // Outside the field-valued universe, so never a member.
                None => DecodeTrace {
                    answer: false,
                    coordinates_read: 0,
                },
                Some(point) => DecodeTrace {
                    answer: evaluate(x, point, &self.field) == hash_to_field(&self.seeds.h, u, &self.field),
                    coordinates_read: x.len(),
                },
            },
        }
    }
}

/// Free-function form of [`Encoding::decode`].
pub fn decode(enc: &Encoding, u: &UniverseElement) -> bool {
    enc.decode(u)
}

/// Encodes `set` under `params`, drawing all randomness from `rng`.
///
/// The set is validated before any randomness is consumed: it must hold at
/// most `k_hat` distinct elements, each at most 65535 bytes long, and in
/// Vandermonde mode each element must be a distinct field element (see
/// [`UniverseElement::as_index`]).
pub fn encode<R: RngCore + CryptoRng + ?Sized>(
    set: &[UniverseElement],
    params: &Params,
    rng: &mut R,
) -> Result<Encoding, Error> {
    if set.len() > params.k_hat() {
        return Err(Error::SetTooLarge {
            size: set.len(),
            k_hat: params.k_hat(),
        });
    }
    let mut seen = HashSet::with_capacity(set.len());
    for (index, s) in set.iter().enumerate() {
        if s.len() > u16::MAX as usize {
            return Err(Error::ElementTooLong { index });
        }
        if !seen.insert(s.as_bytes()) {
            return Err(Error::DuplicateElement { index });
        }
    }
    let field = Field::new(params.field());
    let points = if params.mode() == Mode::Vandermonde {
        let mut mapped = HashSet::with_capacity(set.len());
        let mut points = Vec::with_capacity(set.len());
        for (index, s) in set.iter().enumerate() {
            let u = s
                .as_index()
                .and_then(|v| field.element(v).ok())
                .ok_or(Error::NotRepresentable { index })?;
            if !mapped.insert(u) {
                return Err(Error::DuplicateElement { index });
            }
            points.push(u);
        }
        points
    } else {
        Vec::new()
    };

    let enc_params = EncodingParams::from(params);
    let mut seeds = Seeds {
        h: HashSeed::random(rng),
        ..Seeds::default()
    };
    if params.mode() == Mode::Band {
        seeds.h1 = HashSeed::random(rng);
        seeds.h2 = HashSeed::random(rng);
    }
    if params.mode() == Mode::Trivial {
        return Encoding::from_parts(enc_params, seeds, Payload::Solution(Vec::new()));
    }

    // p = 1/(q - 1): drop exactly when a uniform draw from [0, q - 1) is 0.
    let q = field.order();
    let kept: Vec<usize> = (0..set.len())
        .filter(|_| uniform_below(rng, q - 1) != 0)
        .collect();

    let payload = match params.mode() {
        Mode::Band => {
            let m = params.m();
            if kept.len() > m {
                Payload::Fallback(set.to_vec())
            } else {
                let mut rows = Vec::with_capacity(kept.len());
                for &i in &kept {
                    let mut row = row_band(&set[i], &seeds.h1, &seeds.h2, m, params.w(), &field)?;
                    row.rhs = hash_to_field(&seeds.h, &set[i], &field);
                    rows.push(row);
                }
                match solve_band(rows, m, &field, rng)?.solution {
                    Some(x) => Payload::Solution(x),
                    None => Payload::Fallback(set.to_vec()),
                }
            }
        }
        Mode::Vandermonde => {
            let vdm: Vec<VdmPoint> = kept
                .iter()
                .map(|&i| VdmPoint {
                    u: points[i],
                    rhs: hash_to_field(&seeds.h, &set[i], &field),
                })
                .collect();
            Payload::Solution(solve_vdm(&vdm, params.m(), &field, rng)?)
        }
        Mode::Trivial => unreachable!(),
    };
    Encoding::from_parts(enc_params, seeds, payload)
}
