//! Master seeds and the per-trial generators derived from them.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

/// A 32-byte master seed. Trial `i` draws from ChaCha20 keyed by the seed on
/// stream `i`, so results do not depend on scheduling.
#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct MasterSeed([u8; 32]);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeedParseError {
    #[error("seed is not valid hex: {0}")]
    Hex(#[from] hex::FromHexError),
    #[error("seed is {0} bytes; at most 32 are allowed")]
    TooLong(usize),
}

impl MasterSeed {
    pub fn new(bytes: [u8; 32]) -> Self {
        MasterSeed(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn from_u64(v: u64) -> Self {
        let mut b = [0u8; 32];
        b[..8].copy_from_slice(&v.to_le_bytes());
        MasterSeed(b)
    }

    pub fn trial_rng(&self, trial: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::from_seed(self.0);
        rng.set_stream(trial);
        rng
    }

    /// An independent seed for a labelled sub-experiment.
    pub fn derive(&self, label: u64) -> MasterSeed {
        let mut b = self.0;
        for (i, x) in label.to_le_bytes().iter().enumerate() {
            b[24 + i] ^= x;
        }
        b[23] ^= 0x5a;
        MasterSeed(b)
    }
}

impl FromStr for MasterSeed {
    type Err = SeedParseError;

    /// Hex, zero-padded on the right to 32 bytes.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = hex::decode(s.trim())?;
        if bytes.len() > 32 {
            return Err(SeedParseError::TooLong(bytes.len()));
        }
        let mut b = [0u8; 32];
        b[..bytes.len()].copy_from_slice(&bytes);
        Ok(MasterSeed(b))
    }
}

impl fmt::Debug for MasterSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MasterSeed({})", hex::encode(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn parses_short_hex() {
        let s: MasterSeed = "0102".parse().unwrap();
        assert_eq!(s.0[..3], [1, 2, 0]);
        assert!("zz".parse::<MasterSeed>().is_err());
        assert_eq!("00".repeat(33).parse::<MasterSeed>(), Err(SeedParseError::TooLong(33)));
    }

    #[test]
    fn streams_differ_and_repeat() {
        let s = MasterSeed::from_u64(9);
        assert_eq!(s.trial_rng(3).next_u64(), s.trial_rng(3).next_u64());
        assert_ne!(s.trial_rng(3).next_u64(), s.trial_rng(4).next_u64());
        assert_ne!(s.derive(1).trial_rng(0).next_u64(), s.trial_rng(0).next_u64());
    }
}
