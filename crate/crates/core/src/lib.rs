//! FMCW radar micro-vibration toolkit.
//!
//! The crate simulates baseband I/Q captures of scenes containing static
//! clutter and damped vibrating scatterers, then recovers per-source
//! vibration frequencies through a staged pipeline:
//!
//! 1. range FFT and energy-based range-bin selection ([`dsp`]),
//! 2. I/Q circle fitting and phase recentering ([`dsp`]),
//! 3. coherent chirp phase differencing with interquartile-mean outlier
//!    rejection ([`coherence`]),
//! 4. kurtosis-guided FastICA source separation across virtual antennas
//!    ([`bss`]),
//! 5. sub-bin spectral frequency estimation ([`spectral`]).
//!
//! [`harness`] orchestrates end-to-end experiments (ablation ladders, MAE
//! grids, chirp-repetition sweeps, synthetic drought runs) and backs the
//! `leafvib` command-line tool.

pub mod bss;
pub mod coherence;
pub mod dsp;
pub mod error;
pub mod harness;
pub mod mechanics;
pub mod series;
pub mod simulator;
pub mod spectral;

pub use bss::{MixedObservations, SeparationResult};
pub use coherence::{CoherentPhase, PhaseDiffMatrix};
pub use dsp::{CircleFit, PhaseMatrix, RangeProfile, WindowKind};
pub use error::{Error, Result};
pub use harness::{MaeReport, PipelineConfig, PipelineVariant};
pub use mechanics::{BeamParams, OscillatorParams};
pub use series::DisplacementSeries;
pub use simulator::{ChirpConfig, IqCube, Motion, NoiseSpec, Scatterer, SceneSpec};
pub use spectral::{Spectrum, VibrationEstimate};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
