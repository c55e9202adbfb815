//! Evaluation harness for `dpset-core`: utility and timing runs, band-width
//! calibration, privacy audits and reference bounds, with CSV output.

pub mod audit;
pub mod bounds;
pub mod calibrate;
pub mod preset;
pub mod report;
pub mod seed;
pub mod stats;
pub mod utility;

pub use audit::{dp_audit, AuditReport};
pub use bounds::{space_lower_bound_bits, utility_lower_bound, BoundsRow};
pub use calibrate::{calibrate_band_width, is_non_increasing, CalibrationRow};
pub use preset::{figure1_preset, PresetPoint};
pub use seed::MasterSeed;
pub use stats::{MeanStd, Rate};
pub use utility::{run_utility, TrialStats};
