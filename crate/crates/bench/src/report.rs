//! CSV output.

use std::io::Write;

use crate::audit::AuditReport;
use crate::bounds::BoundsRow;
use crate::calibrate::CalibrationRow;
use crate::utility::TrialStats;

pub const UTILITY_COLUMNS: [&str; 20] = [
    "mode",
    "epsilon_target",
    "epsilon_achieved",
    "q",
    "k",
    "m",
    "w",
    "trials",
    "fpr",
    "fpr_lo",
    "fpr_hi",
    "fnr",
    "fnr_lo",
    "fnr_hi",
    "error",
    "fallbacks",
    "encode_ms_mean",
    "decode_us_mean",
    "encoding_bytes",
    "alpha_lower_bound",
];

/// Timing columns are left empty when `timing` is false, so repeated runs
/// produce identical bytes.
pub fn write_utility<W: Write>(out: W, rows: &[TrialStats], timing: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(UTILITY_COLUMNS)?;
    for s in rows {
        let timed = |v: f64| if timing { v.to_string() } else { String::new() };
        w.write_record([
            s.mode.name().to_string(),
            s.epsilon_target.to_string(),
            s.epsilon_achieved.to_string(),
            s.q.to_string(),
            s.k.to_string(),
            s.m.to_string(),
            s.w.to_string(),
            s.trials.to_string(),
            s.fpr.point.to_string(),
            s.fpr.lo.to_string(),
            s.fpr.hi.to_string(),
            s.fnr.point.to_string(),
            s.fnr.lo.to_string(),
            s.fnr.hi.to_string(),
            s.error.point.to_string(),
            s.fallback_count.to_string(),
            timed(s.encode_ms.mean),
            timed(s.decode_us.mean),
            s.encoding_bytes.to_string(),
            s.alpha_lower_bound().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_calibration<W: Write>(out: W, rows: &[CalibrationRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["w", "trials", "failures", "failure_rate"])?;
    for r in rows {
        w.write_record([
            r.w.to_string(),
            r.trials.to_string(),
            r.failures.to_string(),
            r.failure_rate().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_bounds<W: Write>(out: W, rows: &[BoundsRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["epsilon", "delta", "alpha_lower", "space_lower_bits"])?;
    for r in rows {
        w.write_record([
            r.epsilon.to_string(),
            r.delta.to_string(),
            r.alpha_lower.to_string(),
            r.space_lower_bits.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_audit<W: Write>(out: W, params: &dpset_core::Params, k: usize, r: &AuditReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "mode",
        "epsilon_achieved",
        "q",
        "k",
        "per_side",
        "with_u",
        "without_u",
        "ratio",
        "ratio_lo",
        "ratio_hi",
        "worst_ratio_lo",
        "bound",
        "pass",
    ])?;
    w.write_record([
        params.mode().name().to_string(),
        params.epsilon_achieved().to_string(),
        params.field().order().to_string(),
        k.to_string(),
        r.with_u.total.to_string(),
        r.with_u.point.to_string(),
        r.without_u.point.to_string(),
        r.ratio.to_string(),
        r.ratio_lo.to_string(),
        r.ratio_hi.to_string(),
        r.worst_ratio_lo.to_string(),
        r.bound.to_string(),
        r.pass().to_string(),
    ])?;
    w.flush()?;
    Ok(())
}
