//! CSV rendering of experiment outputs.
//!
//! Every file starts with a `#`-prefixed schema comment. Frequencies are
//! printed with six decimal places.

use crate::harness::diurnal::DayDelta;
use crate::harness::experiments::AblationOutcome;
use crate::harness::mae::MaeReport;
use crate::harness::sweep::SweepPoint;
use crate::spectral::{Spectrum, VibrationEstimate};
use std::fmt::Write;

pub const CSV_SCHEMA_VERSION: &str = "leafvib-csv v1";

fn header(kind: &str) -> String {
    format!("# {CSV_SCHEMA_VERSION} {kind}\n")
}

pub fn estimates_csv(estimates: &[VibrationEstimate]) -> String {
    let mut out = header("estimates");
    out.push_str("source_index,frequency_hz,amplitude_m,peak_snr_db\n");
    for e in estimates {
        writeln!(
            out,
            "{},{:.6},{:.6e},{:.3}",
            e.source_index, e.frequency_hz, e.amplitude_m, e.peak_snr_db
        )
        .unwrap();
    }
    out
}

pub fn mae_csv(report: &MaeReport) -> String {
    let mut out = header("mae");
    out.push_str("band,variant,mae_hz,stderr_hz,n_trials,misses\n");
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{:.6},{:.6},{},{}",
            row.band.name(),
            row.variant,
            row.mae_hz,
            row.stderr_hz,
            row.n_trials,
            row.misses
        )
        .unwrap();
    }
    out
}

pub fn ablation_csv(rows: &[AblationOutcome]) -> String {
    let mut out = header("ablation");
    out.push_str("scene,variant,mae_hz,penalized_mae_hz,n_trials,misses\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{:.6},{:.6},{},{}",
            row.scene,
            row.variant.name(),
            row.matched_mae_hz,
            row.penalized_mae_hz,
            row.n_trials,
            row.misses
        )
        .unwrap();
    }
    out
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = header("chirp-repetition sweep");
    out.push_str("repetition_time_us,median_iqr_rad,mae_hz,n_trials\n");
    for p in points {
        writeln!(
            out,
            "{:.1},{:.6},{:.6},{}",
            p.repetition_time_us, p.median_iqr_rad, p.mae_hz, p.n_trials
        )
        .unwrap();
    }
    out
}

pub fn diurnal_csv(truth: &[f64], measured: &[DayDelta]) -> String {
    let mut out = header("diurnal deltas");
    out.push_str("day,truth_delta_hz,measured_delta_hz,day_median_hz,night_median_hz\n");
    for d in measured {
        let t = truth.get(d.day).copied().unwrap_or(f64::NAN);
        writeln!(
            out,
            "{},{:.6},{:.6},{:.6},{:.6}",
            d.day, t, d.delta_hz, d.day_median_hz, d.night_median_hz
        )
        .unwrap();
    }
    out
}

/// Plot-data export: frequency versus magnitude.
pub fn spectrum_csv(spectrum: &Spectrum) -> String {
    let mut out = header("spectrum");
    out.push_str("frequency_hz,magnitude\n");
    for (f, m) in spectrum.freqs_hz.iter().zip(&spectrum.magnitude) {
        writeln!(out, "{f:.6},{m:.6e}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimates_csv_layout() {
        let est = VibrationEstimate {
            frequency_hz: 2.031234567,
            amplitude_m: 8.12e-4,
            peak_snr_db: 23.4,
            source_index: 0,
        };
        let csv = estimates_csv(&[est]);
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("# leafvib-csv v1"));
        assert_eq!(
            lines.next().unwrap(),
            "source_index,frequency_hz,amplitude_m,peak_snr_db"
        );
        assert_eq!(lines.next().unwrap(), "0,2.031235,8.120000e-4,23.400");
    }
}
