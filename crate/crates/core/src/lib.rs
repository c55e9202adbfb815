//! Differentially private set representations from random linear systems.
//!
//! A set `S` is released as the solution `x` of a random linear system with
//! one constraint `Row(s) . x = h(s)` per retained element. Membership of
//! `u` is answered by checking `Row(u) . x = h(u)`. Randomly dropping input
//! elements and filling free variables uniformly makes the output
//! `(epsilon, delta)`-differentially private with per-query error
//! `1/(e^epsilon + 1)`.
//!
//! Three modes are provided:
//!
//! * [`Mode::Band`]: random band rows, `m = (1 + beta) k_hat` columns,
//!   `O(w)` decode; fails (and releases the set in the clear) with
//!   probability about `delta`.
//! * [`Mode::Vandermonde`]: polynomial rows over a field-valued universe;
//!   never fails, so `delta = 0`.
//! * [`Mode::Trivial`]: ignores the input and answers random bits.
//!
//! ```
//! use dpset_core::{derive_params, encode, Mode, UniverseElement};
//! use rand::rngs::OsRng;
//!
//! let params = derive_params(3f64.ln(), 2f64.powi(-40), 100, 0.05, Mode::Band).unwrap();
//! let set: Vec<_> = (0..100u32).map(UniverseElement::from_index).collect();
//! let enc = encode(&set, &params, &mut OsRng).unwrap();
//! let bytes = enc.to_bytes();
//! let back = dpset_core::Encoding::from_bytes(&bytes).unwrap();
//! let _ = back.decode(&set[0]);
//! ```

pub mod band;
pub mod encoding;
pub mod error;
pub mod field;
pub mod hashing;
pub mod params;
pub mod vandermonde;
pub mod wire;

pub use band::{default_band_width, row_band, solve_band, BandSolveOutcome, BandWidthConstants, SparseBandRow};
pub use encoding::{decode, encode, DecodeTrace, Encoding, EncodingParams, Payload, Seeds, TrialOutcome};
pub use error::Error;
pub use field::{select_field, Field, FieldElement, FieldKind, FieldSpec};
pub use hashing::{hash_band_start, hash_band_values, hash_to_field, HashSeed, UniverseElement};
pub use params::{derive_params, epsilon_of, m_optimized, Mode, Params, ParamsBuilder};
pub use vandermonde::{row_vdm, solve_vdm, VdmPoint};
pub use wire::{deserialize, serialize, solution_payload_len, ParseError, HEADER_LEN};
