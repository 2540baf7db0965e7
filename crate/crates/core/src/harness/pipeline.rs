//! Pipeline variants from raw phase to full source separation.

use crate::bss::{fast_ica, reconstruct_sources, select_component_count, MixedObservations};
use crate::coherence::{chirp_phase_differences, coherent_displacement, iqm_reduce, CoherentPhase};
use crate::dsp::{
    displacement_from_phase, extract_bin, fit_circle, phase_matrix, range_profile,
    select_range_bin, BinSeries, WindowKind,
};
use crate::error::{Error, Result};
use crate::series::DisplacementSeries;
use crate::simulator::IqCube;
use crate::spectral::{estimate_frequency, VibrationEstimate};
use serde::{Deserialize, Serialize};

/// Ablation ladder: each variant adds one processing stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineVariant {
    /// Uncentered single-chirp phase, one antenna.
    Raw,
    /// Adds circle recentering.
    Refine,
    /// Adds coherent chirp differencing with IQM reduction.
    PhaseDiff,
    /// Adds FastICA source separation across every virtual antenna.
    Full,
}

impl PipelineVariant {
    pub const ALL: [PipelineVariant; 4] = [
        PipelineVariant::Raw,
        PipelineVariant::Refine,
        PipelineVariant::PhaseDiff,
        PipelineVariant::Full,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PipelineVariant::Raw => "raw",
            PipelineVariant::Refine => "refine",
            PipelineVariant::PhaseDiff => "phasediff",
            PipelineVariant::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(PipelineVariant::Raw),
            "refine" => Ok(PipelineVariant::Refine),
            "phasediff" => Ok(PipelineVariant::PhaseDiff),
            "full" => Ok(PipelineVariant::Full),
            other => Err(Error::InvalidParameter(format!(
                "unknown variant '{other}' (expected raw|refine|phasediff|full)"
            ))),
        }
    }

    pub fn ica_enabled(&self) -> bool {
        matches!(self, PipelineVariant::Full)
    }
}

/// Pipeline settings shared by every variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub variant: PipelineVariant,
    /// Search band for the vibration line, Hz.
    pub band_hz: (f64, f64),
    /// Distance limits for range-bin selection, m.
    pub range_limits_m: (f64, f64),
    /// Seed for the ICA stage.
    pub seed: u64,
    /// Fixed component count; `None` selects it from the kurtosis scan.
    pub n_components: Option<usize>,
}

impl PipelineConfig {
    pub fn new(variant: PipelineVariant, band_hz: (f64, f64), range_limits_m: (f64, f64)) -> Self {
        Self {
            variant,
            band_hz,
            range_limits_m,
            seed: 0,
            n_components: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

fn single_estimate(
    series: &DisplacementSeries,
    band: (f64, f64),
) -> Result<Vec<VibrationEstimate>> {
    match estimate_frequency(series, band) {
        Ok(est) => Ok(vec![est]),
        Err(Error::NoVibration { .. }) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// Uncentered phase of chirp 0 along frames.
fn raw_phase_series(series: &BinSeries, antenna: usize) -> Vec<f64> {
    (0..series.frames)
        .map(|f| series.value(antenna, f, 0).arg())
        .collect()
}

/// Recentered phase of chirp 0 along frames; `None` when the constellation
/// carries no motion.
fn refined_phase_series(series: &BinSeries, antenna: usize) -> Result<Option<Vec<f64>>> {
    let points = &series.per_antenna[antenna];
    let fit = match fit_circle(points) {
        Ok(fit) => fit,
        Err(Error::DegenerateCircle(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !fit.indicates_motion() {
        return Ok(None);
    }
    let recentered = crate::dsp::recenter_phase(points, &fit)?;
    Ok(Some(
        (0..series.frames)
            .map(|f| recentered.phases[f * series.chirps])
            .collect(),
    ))
}

/// Coherent chirp-difference displacement for one antenna, along with the
/// reduction diagnostics. `None` when the constellation carries no motion.
pub fn phasediff_displacement(
    series: &BinSeries,
    antenna: usize,
    carrier_hz: f64,
    frame_rate_hz: f64,
) -> Result<Option<(DisplacementSeries, CoherentPhase)>> {
    let points = &series.per_antenna[antenna];
    let fit = match fit_circle(points) {
        Ok(fit) => fit,
        Err(Error::DegenerateCircle(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !fit.indicates_motion() {
        return Ok(None);
    }
    let pm = phase_matrix(series, antenna, &fit)?;
    let dm = chirp_phase_differences(&pm)?;
    let cp = iqm_reduce(&dm)?;
    let disp = coherent_displacement(&cp, carrier_hz, frame_rate_hz)?;
    Ok(Some((disp, cp)))
}

/// Run the selected pipeline variant over a capture.
///
/// Returns one estimate per detected source, ordered by source amplitude
/// for the full variant. An empty list means no vibration was detected.
pub fn run_pipeline(cube: &IqCube, cfg: &PipelineConfig) -> Result<Vec<VibrationEstimate>> {
    let profile = range_profile(cube, WindowKind::Hann)?;
    let bin = select_range_bin(&profile, cfg.range_limits_m)?;
    let series = extract_bin(cube, bin, WindowKind::Hann)?;
    let carrier = cube.config.carrier_hz();
    let rate = cube.config.frame_rate_hz();

    match cfg.variant {
        PipelineVariant::Raw => {
            let phases = raw_phase_series(&series, 0);
            let disp = displacement_from_phase(&phases, carrier, rate)?;
            single_estimate(&disp, cfg.band_hz)
        }
        PipelineVariant::Refine => match refined_phase_series(&series, 0)? {
            Some(phases) => {
                let disp = displacement_from_phase(&phases, carrier, rate)?;
                single_estimate(&disp, cfg.band_hz)
            }
            None => Ok(Vec::new()),
        },
        PipelineVariant::PhaseDiff => match phasediff_displacement(&series, 0, carrier, rate)? {
            Some((disp, _)) => single_estimate(&disp, cfg.band_hz),
            None => Ok(Vec::new()),
        },
        PipelineVariant::Full => {
            let n_ant = cube.config.virtual_antennas();
            let frames = series.frames;
            let mut channels = Vec::with_capacity(n_ant);
            let mut any_motion = false;
            for antenna in 0..n_ant {
                match phasediff_displacement(&series, antenna, carrier, rate)? {
                    Some((disp, _)) => {
                        any_motion = true;
                        channels.push(disp);
                    }
                    // Flagged antennas contribute a zero series so channel
                    // indexing stays aligned with the antenna array.
                    None => channels.push(DisplacementSeries::new(vec![0.0; frames], rate)),
                }
            }
            if !any_motion {
                return Ok(Vec::new());
            }
            let x = MixedObservations::from_series(&channels)?;
            let count = match cfg.n_components {
                Some(c) => c,
                None if x.channels() < 2 => 1,
                None => select_component_count(&x, cfg.seed)?.count,
            };
            let result = fast_ica(&x, count, cfg.seed)?;
            let sources = reconstruct_sources(&result);
            let mut estimates = Vec::new();
            for (rank, source) in sources.iter().enumerate() {
                match estimate_frequency(&source.series, cfg.band_hz) {
                    Ok(mut est) => {
                        est.source_index = rank;
                        estimates.push(est);
                    }
                    Err(Error::NoVibration { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(estimates)
        }
    }
}
