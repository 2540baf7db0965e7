//! Range processing and phase refinement.
//!
//! Stage one finds the scatterer of interest: FFT along fast time, energy
//! per range bin, argmax inside configured distance limits. Stage two turns
//! the selected bin's I/Q samples into motion phase: a least-squares circle
//! fit locates the static clutter vector, recentering removes it, and the
//! remaining angle tracks the scatterer displacement.

mod circle;
mod phase;
mod range;

pub use circle::{fit_circle, CircleFit};
pub use phase::{
    displacement_from_phase, phase_matrix, recenter_phase, unwrap_phase, PhaseMatrix,
    RecenteredPhase,
};
pub use range::{
    extract_bin, fft_forward, range_axis, range_fft, range_profile, select_range_bin, BinSeries,
    RangeProfile,
};

use serde::{Deserialize, Serialize};

/// Fast-time window applied before the range FFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Rectangular,
    /// Default: keeps strong clutter (walls) from leaking across bins.
    Hann,
}

impl WindowKind {
    /// Window coefficient at index `i` of an `n`-point window (periodic form).
    pub fn coefficient(self, i: usize, n: usize) -> f64 {
        match self {
            WindowKind::Rectangular => 1.0,
            WindowKind::Hann => {
                0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
            }
        }
    }

    /// Sum of coefficients, for amplitude normalization.
    pub fn coherent_gain(self, n: usize) -> f64 {
        (0..n).map(|i| self.coefficient(i, n)).sum::<f64>() / n as f64
    }
}
