//! Coherent chirp phase differencing with interquartile-mean reduction.
//!
//! Consecutive chirps are microseconds apart, so their phase difference is
//! tiny and immune to wrapping even when the per-frame phase swings by
//! multiple pi. Each chirp row is unwrapped along frames independently;
//! a row whose unwrap glitches produces a +-2 pi spike in exactly two
//! adjacent difference rows, which the interquartile mean rejects. The
//! per-frame reduction is accumulated into a single coherent phase series.

use crate::dsp::{unwrap_phase, PhaseMatrix};
use crate::error::{Error, Result};
use crate::series::DisplacementSeries;
use crate::SPEED_OF_LIGHT;

/// Differences between consecutive chirp rows, `dphi[l][frame]` for
/// `l = 0 .. chirps-2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiffMatrix {
    pub dphi: Vec<Vec<f64>>,
}

impl PhaseDiffMatrix {
    pub fn rows(&self) -> usize {
        self.dphi.len()
    }

    pub fn frames(&self) -> usize {
        self.dphi.first().map_or(0, Vec::len)
    }

    /// Column view: all difference values observed at one frame.
    pub fn column(&self, frame: usize) -> Vec<f64> {
        self.dphi.iter().map(|row| row[frame]).collect()
    }
}

/// Reduced coherent phase sequence along frames.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentPhase {
    /// Cumulative phase, radians, anchored at `series[0] = 0`.
    pub series: Vec<f64>,
    /// Per-frame (Q1, Q3) interquartile bounds of the chirp differences.
    pub iqr_bounds: Vec<(f64, f64)>,
    /// Fraction of difference values that fell outside their frame's IQR.
    pub rejected_fraction: f64,
    /// True when fewer than four difference rows forced a median fallback.
    pub median_fallback: bool,
}

impl CoherentPhase {
    /// Median width Q3 - Q1 across frames; a spread measure of the
    /// inter-chirp differences.
    pub fn median_iqr_width(&self) -> f64 {
        let mut widths: Vec<f64> = self.iqr_bounds.iter().map(|(q1, q3)| q3 - q1).collect();
        if widths.is_empty() {
            return 0.0;
        }
        widths.sort_by(|a, b| a.partial_cmp(b).unwrap());
        widths[widths.len() / 2]
    }
}

/// Unwrap each chirp row along frames, then subtract consecutive rows.
pub fn chirp_phase_differences(pm: &PhaseMatrix) -> Result<PhaseDiffMatrix> {
    let l = pm.chirps();
    if l < 2 {
        return Err(Error::TooFew {
            what: "chirps for phase differencing",
            needed: 2,
            got: l,
        });
    }
    let unwrapped: Vec<Vec<f64>> = pm.phase.iter().map(|row| unwrap_phase(row)).collect();
    let dphi = unwrapped
        .windows(2)
        .map(|pair| {
            pair[1]
                .iter()
                .zip(&pair[0])
                .map(|(b, a)| b - a)
                .collect::<Vec<f64>>()
        })
        .collect();
    Ok(PhaseDiffMatrix { dphi })
}

/// Linear-interpolation quantile (the common "type 7" convention) of a
/// sorted slice.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Mean of the values inside the inclusive interquartile range `[Q1, Q3]`.
/// Inclusive bounds guarantee at least half the values are retained, so the
/// reduction can never come up empty.
fn interquartile_mean(values: &[f64]) -> (f64, (f64, f64), usize) {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let mut sum = 0.0;
    let mut kept = 0usize;
    for &v in &sorted {
        if v >= q1 && v <= q3 {
            sum += v;
            kept += 1;
        }
    }
    (sum / kept as f64, (q1, q3), values.len() - kept)
}

/// Reduce the chirp axis to one coherent per-frame phase increment via the
/// interquartile mean, then integrate along frames.
///
/// With fewer than four difference rows the quartiles are meaningless; the
/// reduction falls back to the per-frame median and flags it.
pub fn iqm_reduce(dm: &PhaseDiffMatrix) -> Result<CoherentPhase> {
    let rows = dm.rows();
    if rows == 0 {
        return Err(Error::TooFew {
            what: "difference rows",
            needed: 1,
            got: 0,
        });
    }
    let frames = dm.frames();
    if frames == 0 {
        return Err(Error::TooFew {
            what: "frames",
            needed: 1,
            got: 0,
        });
    }
    let median_fallback = rows < 4;

    let mut increments = Vec::with_capacity(frames);
    let mut iqr_bounds = Vec::with_capacity(frames);
    let mut rejected = 0usize;
    for frame in 0..frames {
        let col = dm.column(frame);
        if median_fallback {
            let mut sorted = col;
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mid = sorted.len() / 2;
            let med = if sorted.len() % 2 == 0 {
                0.5 * (sorted[mid - 1] + sorted[mid])
            } else {
                sorted[mid]
            };
            increments.push(med);
            iqr_bounds.push((sorted[0], sorted[sorted.len() - 1]));
        } else {
            let (mean, bounds, dropped) = interquartile_mean(&col);
            increments.push(mean);
            iqr_bounds.push(bounds);
            rejected += dropped;
        }
    }

    // The per-frame reduction is the per-frame phase increment; integrate
    // with the first frame as the zero reference (absolute phase is
    // unobservable).
    let mut series = Vec::with_capacity(frames);
    series.push(0.0);
    let mut acc = 0.0;
    for &inc in &increments[1..] {
        acc += inc;
        series.push(acc);
    }

    Ok(CoherentPhase {
        series,
        iqr_bounds,
        rejected_fraction: rejected as f64 / (rows * frames) as f64,
        median_fallback,
    })
}

/// Scale the coherent phase into displacement units (same law as the
/// single-chirp path).
pub fn coherent_displacement(
    cp: &CoherentPhase,
    carrier_hz: f64,
    frame_rate_hz: f64,
) -> Result<DisplacementSeries> {
    if !(carrier_hz > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "carrier must be positive, got {carrier_hz}"
        )));
    }
    let scale = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * carrier_hz);
    Ok(DisplacementSeries::new(
        cp.series.iter().map(|p| p * scale).collect(),
        frame_rate_hz,
    ))
}
