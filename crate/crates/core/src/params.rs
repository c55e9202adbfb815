//! Mechanism parameters.
//!
//! For an error target `alpha` the encoder works over a field with
//! `q >= 1/alpha` elements and drops every input element independently with
//! probability `p = alpha / (1 - alpha)`. With `alpha = 1/q` that is exactly
//! `p = 1/(q - 1)` and the privacy loss is `ln((1 - alpha)/alpha) = ln(q - 1)`.

use std::fmt;
use std::str::FromStr;

use crate::band::{default_band_width, BandWidthConstants};
use crate::error::Error;
use crate::field::{select_field, FieldSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Random band rows; approximate DP with failure probability `delta`.
    Band,
    /// Vandermonde rows over a field-valued universe; pure DP.
    Vandermonde,
    /// Input-independent random bits; `alpha = 1/2`, `epsilon = 0`.
    Trivial,
}

impl Mode {
    pub fn code(self) -> u8 {
        match self {
            Mode::Band => 0,
            Mode::Vandermonde => 1,
            Mode::Trivial => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Mode::Band),
            1 => Some(Mode::Vandermonde),
            2 => Some(Mode::Trivial),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Band => "band",
            Mode::Vandermonde => "vandermonde",
            Mode::Trivial => "trivial",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "band" => Ok(Mode::Band),
            "vandermonde" => Ok(Mode::Vandermonde),
            "trivial" => Ok(Mode::Trivial),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Fully derived parameters. Construct through [`derive_params`] or
/// [`ParamsBuilder`]; the derived fields are always mutually consistent.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    epsilon_target: f64,
    delta: f64,
    alpha: f64,
    p: f64,
    field: FieldSpec,
    m: usize,
    w: usize,
    k_hat: usize,
    beta: f64,
    mode: Mode,
    epsilon_achieved: f64,
}

impl Params {
    pub fn epsilon_target(&self) -> f64 {
        self.epsilon_target
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    /// Achieved error probability, `1/q`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// Exclusion probability.
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn field(&self) -> FieldSpec {
        self.field
    }
    /// Length of the solution vector (0 in trivial mode).
    pub fn m(&self) -> usize {
        self.m
    }
    /// Band width (0 outside band mode).
    pub fn w(&self) -> usize {
        self.w
    }
    pub fn k_hat(&self) -> usize {
        self.k_hat
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }
    pub fn epsilon_achieved(&self) -> f64 {
        self.epsilon_achieved
    }
}

#[derive(Debug, Clone)]
pub struct ParamsBuilder {
    mode: Mode,
    epsilon_target: f64,
    k_hat: usize,
    delta: f64,
    beta: f64,
    band_width: Option<usize>,
    band_constants: BandWidthConstants,
    universe_size: Option<u64>,
    field: Option<FieldSpec>,
    space_gamma: Option<f64>,
}

impl ParamsBuilder {
    /// Defaults: `delta = 2^-40` in band mode (0 otherwise), `beta = 0.05`,
    /// calibrated band-width constants.
    pub fn new(mode: Mode, epsilon_target: f64, k_hat: usize) -> Self {
        ParamsBuilder {
            mode,
            epsilon_target,
            k_hat,
            delta: if mode == Mode::Band { 2f64.powi(-40) } else { 0.0 },
            beta: 0.05,
            band_width: None,
            band_constants: BandWidthConstants::default(),
            universe_size: None,
            field: None,
            space_gamma: None,
        }
    }

    pub fn delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    /// Fixes the band width instead of deriving it from `delta` and `k_hat`.
    pub fn band_width(mut self, w: usize) -> Self {
        self.band_width = Some(w);
        self
    }

    pub fn band_constants(mut self, c: BandWidthConstants) -> Self {
        self.band_constants = c;
        self
    }

    /// Size of the universe; Vandermonde mode rejects fields smaller than it.
    pub fn universe_size(mut self, n: u64) -> Self {
        self.universe_size = Some(n);
        self
    }

    /// Uses `field` instead of the smallest field meeting the error target.
    pub fn field(mut self, field: FieldSpec) -> Self {
        self.field = Some(field);
        self
    }

    /// Sizes `m` for the expected number of surviving elements (band mode
    /// only). The shorter of the two lengths is used.
    pub fn space_optimization(mut self, gamma: f64) -> Self {
        self.space_gamma = Some(gamma);
        self
    }

    pub fn build(self) -> Result<Params, Error> {
        let invalid = |name: &'static str, reason: String| Error::InvalidParameter { name, reason };
        if self.k_hat == 0 {
            return Err(invalid("k_hat", "must be at least 1".into()));
        }
        if self.mode == Mode::Trivial {
            if self.epsilon_target.is_nan() || self.epsilon_target < 0.0 {
                return Err(invalid("epsilon", format!("{} is negative", self.epsilon_target)));
            }
            if self.delta != 0.0 {
                return Err(invalid("delta", "must be 0 in trivial mode".into()));
            }
            return Ok(Params {
                epsilon_target: self.epsilon_target,
                delta: 0.0,
                alpha: 0.5,
                p: 1.0,
                field: FieldSpec::binary(1)?,
                m: 0,
                w: 0,
                k_hat: self.k_hat,
                beta: self.beta,
                mode: Mode::Trivial,
                epsilon_achieved: 0.0,
            });
        }

        if !self.epsilon_target.is_finite() || self.epsilon_target <= 0.0 {
            return Err(invalid("epsilon", format!("{} is not positive", self.epsilon_target)));
        }
        let field = match self.field {
            Some(f) => f,
            None => select_field(1.0 / (self.epsilon_target.exp() + 1.0))?,
        };
        let q = field.order() as f64;
        let alpha = 1.0 / q;
        // alpha / (1 - alpha), without the rounding of the quotient.
        let p = 1.0 / (q - 1.0);
        let epsilon_achieved = ((1.0 - alpha) / alpha).ln();

        let (m, w) = match self.mode {
            Mode::Band => {
                if !(self.delta > 0.0 && self.delta < 1.0) {
                    return Err(invalid("delta", format!("{} is not in (0, 1)", self.delta)));
                }
                if !self.beta.is_finite() || self.beta <= 0.0 {
                    return Err(invalid("beta", format!("{} is not positive", self.beta)));
                }
                let mut m = ceil_len((1.0 + self.beta) * self.k_hat as f64);
                if let Some(gamma) = self.space_gamma {
                    m = m.min(m_optimized(self.k_hat, p, gamma, self.beta, Mode::Band)?);
                }
                let w = match self.band_width {
                    Some(w) if w >= 1 && w <= m => w,
                    Some(w) => return Err(Error::BandWidth { w, m }),
                    None => default_band_width(self.k_hat, self.delta, m, self.band_constants),
                };
                (m, w)
            }
            Mode::Vandermonde => {
                if self.delta != 0.0 {
                    return Err(invalid("delta", "must be 0 in vandermonde mode".into()));
                }
                if self.space_gamma.is_some() {
                    return Err(invalid("space_optimization", "not available in vandermonde mode".into()));
                }
                if let Some(n) = self.universe_size {
                    if n > field.order() as u64 {
                        return Err(invalid(
                            "universe_size",
                            format!("{n} exceeds the field order {}", field.order()),
                        ));
                    }
                }
                if self.k_hat > field.order() as usize {
                    return Err(invalid(
                        "k_hat",
                        format!("{} exceeds the field order {}", self.k_hat, field.order()),
                    ));
                }
                (self.k_hat, 0)
            }
            Mode::Trivial => unreachable!(),
        };

        Ok(Params {
            epsilon_target: self.epsilon_target,
            delta: self.delta,
            alpha,
            p,
            field,
            m,
            w,
            k_hat: self.k_hat,
            beta: self.beta,
            mode: self.mode,
            epsilon_achieved,
        })
    }
}

/// Parameters with default band-width constants and no universe bound.
pub fn derive_params(epsilon_target: f64, delta: f64, k_hat: usize, beta: f64, mode: Mode) -> Result<Params, Error> {
    ParamsBuilder::new(mode, epsilon_target, k_hat)
        .delta(delta)
        .beta(beta)
        .build()
}

/// Privacy loss of the mechanism for exclusion probability `p` over a field
/// of order `q`: the larger of the removal bound `ln(1/p)` and the insertion
/// bound `ln(p + (1 - p) q)`.
pub fn epsilon_of(p: f64, q: u32) -> f64 {
    let removal = (1.0 / p).ln();
    let insertion = (p + (1.0 - p) * q as f64).ln();
    removal.max(insertion)
}

/// Column count sized for the expected survivor count:
/// `ceil((1 + beta)(1 + gamma)(1 - 2 alpha)/(1 - alpha) k)` with
/// `alpha = p/(1 + p)`. Raises the failure probability by `e^{-O(k)}`, so it
/// is refused in vandermonde mode.
pub fn m_optimized(k: usize, p: f64, gamma: f64, beta: f64, mode: Mode) -> Result<usize, Error> {
    if mode == Mode::Vandermonde {
        return Err(Error::InvalidParameter {
            name: "space_optimization",
            reason: "not available in vandermonde mode".into(),
        });
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: format!("{gamma} is not in (0, 1]"),
        });
    }
    let alpha = p / (1.0 + p);
    let survivors = (1.0 - 2.0 * alpha) / (1.0 - alpha);
    Ok(ceil_len((1.0 + beta) * (1.0 + gamma) * survivors * k as f64))
}

// ceil with a little slack so 1.25 * 4 stays 5 under rounding noise.
fn ceil_len(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}
