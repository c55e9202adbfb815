//! The standard utility grid.

use dpset_core::{derive_params, Error, Mode, Params};

/// Field orders of the grid; each point uses `epsilon = ln(q - 1)`.
pub const FIGURE1_FIELD_ORDERS: [u32; 8] = [3, 4, 8, 16, 32, 64, 128, 256];
/// `2^-40`.
pub const PRESET_DELTA: f64 = 1.0 / (1u64 << 40) as f64;
pub const PRESET_BETA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetPoint {
    pub epsilon: f64,
    pub k: usize,
    pub mode: Mode,
    pub beta: f64,
    pub delta: f64,
}

impl PresetPoint {
    pub fn params(&self) -> Result<Params, Error> {
        derive_params(self.epsilon, self.delta, self.k, self.beta, self.mode)
    }

    /// `epsilon` to two decimals.
    pub fn label(&self) -> String {
        format!("{:.2}", self.epsilon)
    }
}

/// All eight privacy levels at `k = 2^12` and `2^16`, plus `2^20` when
/// `include_largest` is set. Band mode throughout.
pub fn figure1_preset(include_largest: bool) -> Vec<PresetPoint> {
    let mut ks = vec![1usize << 12, 1 << 16];
    if include_largest {
        ks.push(1 << 20);
    }
    ks.iter()
        .flat_map(|&k| {
            FIGURE1_FIELD_ORDERS.iter().map(move |&q| PresetPoint {
                epsilon: ((q - 1) as f64).ln(),
                k,
                mode: Mode::Band,
                beta: PRESET_BETA,
                delta: PRESET_DELTA,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape_and_labels() {
        let grid = figure1_preset(false);
        assert_eq!(grid.len(), 16);
        assert_eq!(figure1_preset(true).len(), 24);
        let labels: Vec<String> = grid[..8].iter().map(PresetPoint::label).collect();
        assert_eq!(labels, ["0.69", "1.10", "1.95", "2.71", "3.43", "4.14", "4.84", "5.54"]);
        assert_eq!(PRESET_DELTA, 2f64.powi(-40));
    }

    #[test]
    fn grid_selects_expected_fields() {
        for (point, &q) in figure1_preset(false).iter().zip(FIGURE1_FIELD_ORDERS.iter().cycle()) {
            let p = point.params().unwrap();
            assert_eq!(p.field().order(), q);
            assert!((p.epsilon_achieved() - point.epsilon).abs() < 1e-12);
        }
    }
}
