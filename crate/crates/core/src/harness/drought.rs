//! Synthetic drought experiment: a leaf whose stem stiffness declines over
//! days without water, with a diurnal stiffness swing that shrinks as the
//! plant loses its ability to recover overnight.

use crate::error::Result;
use crate::harness::diurnal::{diurnal_delta, DayDelta, DiurnalSample, DiurnalSeries};
use crate::harness::pipeline::{run_pipeline, PipelineConfig, PipelineVariant};
use crate::harness::scenes::{
    compact_chirp, single_leaf_scene, STANDARD_BAND_HZ, STANDARD_RANGE_LIMITS,
};
use crate::simulator::{synthesize_cube, NoiseSpec};

/// Measured stiffness of a watered leaf stem and its decline over days
/// without water, N/m. Interpolated linearly between measurement days.
const STIFFNESS_CURVE: [(f64, f64); 8] = [
    (0.0, 1.7),
    (1.0, 1.6),
    (2.0, 1.6),
    (6.0, 1.3),
    (8.0, 1.2),
    (9.0, 1.1),
    (10.0, 1.0),
    (11.0, 1.0),
];

/// Generator parameters for the drought run.
#[derive(Debug, Clone, Copy)]
pub struct DroughtSpec {
    /// Number of days after day 0 (a 7-day run measures days 0..=7).
    pub days: usize,
    /// Measurements per day, split evenly between day and night hours.
    pub measurements_per_day: usize,
    /// Day/night frequency delta on day 0, Hz.
    pub day0_delta_hz: f64,
    /// Delta on the final day, Hz; decays geometrically in between.
    pub final_delta_hz: f64,
    /// Modal mass, kg. The default makes the day-0 stiffness ring at
    /// about 2 Hz.
    pub leaf_mass_kg: f64,
    /// Ring-down envelope amplitude of each excitation, m.
    pub amplitude_m: f64,
}

impl Default for DroughtSpec {
    fn default() -> Self {
        Self {
            days: 7,
            measurements_per_day: 8,
            day0_delta_hz: 0.1,
            final_delta_hz: 0.012,
            leaf_mass_kg: 0.010447,
            amplitude_m: 2.0e-3,
        }
    }
}

/// Ground truth plus (optionally) radar-measured samples of a drought run.
#[derive(Debug, Clone)]
pub struct DroughtRun {
    /// True per-day day-minus-night delta, Hz.
    pub truth_deltas_hz: Vec<f64>,
    /// True frequency at every measurement instant.
    pub truth_samples: Vec<DiurnalSample>,
    /// Radar-estimated frequency at every measurement instant (empty until
    /// the measurement pass runs).
    pub measured_samples: Vec<DiurnalSample>,
}

impl DroughtRun {
    pub fn measured_deltas(&self) -> Result<(Vec<DayDelta>, Vec<usize>)> {
        diurnal_delta(&DiurnalSeries::new(self.measured_samples.clone()))
    }

    pub fn truth_day_deltas(&self) -> Result<(Vec<DayDelta>, Vec<usize>)> {
        diurnal_delta(&DiurnalSeries::new(self.truth_samples.clone()))
    }
}

fn stiffness_at(day: f64) -> f64 {
    let curve = &STIFFNESS_CURVE;
    if day <= curve[0].0 {
        return curve[0].1;
    }
    for pair in curve.windows(2) {
        let (d0, k0) = pair[0];
        let (d1, k1) = pair[1];
        if day <= d1 {
            return k0 + (k1 - k0) * (day - d0) / (d1 - d0);
        }
    }
    curve[curve.len() - 1].1
}

fn measurement_hours(per_day: usize) -> Vec<f64> {
    // Alternate night/day slots across the 24 h cycle; defaults to the
    // 8-slot ladder {2, 5, 8, 11, 14, 17, 20, 23}.
    let step = 24.0 / per_day as f64;
    (0..per_day).map(|i| step * (i as f64 + 0.5)).collect()
}

/// Generate the ground-truth frequency schedule.
///
/// The base frequency follows the stiffness decline evaluated once per day
/// (stepwise, so each day's day/night medians differ by exactly the target
/// delta), and daytime measurements sit `delta/2` above the base while
/// nighttime ones sit `delta/2` below.
pub fn generate_drought_series(spec: &DroughtSpec) -> DroughtRun {
    let decay = (spec.final_delta_hz / spec.day0_delta_hz).powf(1.0 / spec.days as f64);
    let truth_deltas: Vec<f64> = (0..=spec.days)
        .map(|d| spec.day0_delta_hz * decay.powi(d as i32))
        .collect();

    let hours = measurement_hours(spec.measurements_per_day);
    let mut truth_samples = Vec::new();
    for day in 0..=spec.days {
        let k = stiffness_at(day as f64);
        let base_hz =
            (k / spec.leaf_mass_kg).sqrt() / (2.0 * std::f64::consts::PI);
        let delta = truth_deltas[day];
        for &h in &hours {
            let is_day = (6.0..18.0).contains(&h);
            let f = base_hz + if is_day { delta / 2.0 } else { -delta / 2.0 };
            truth_samples.push(DiurnalSample {
                hours: day as f64 * 24.0 + h,
                frequency_hz: f,
            });
        }
    }
    DroughtRun {
        truth_deltas_hz: truth_deltas,
        truth_samples,
        measured_samples: Vec::new(),
    }
}

/// Run the full synthetic experiment: simulate a noiseless capture per
/// measurement and estimate its frequency through the pipeline.
pub fn run_drought_experiment(spec: &DroughtSpec, seed: u64) -> Result<DroughtRun> {
    let mut run = generate_drought_series(spec);
    let cfg = compact_chirp();
    let pipeline = PipelineConfig::new(
        PipelineVariant::Full,
        STANDARD_BAND_HZ,
        STANDARD_RANGE_LIMITS,
    )
    .with_seed(seed);

    let mut measured = Vec::with_capacity(run.truth_samples.len());
    for (i, sample) in run.truth_samples.iter().enumerate() {
        let scene = single_leaf_scene(
            &cfg,
            sample.frequency_hz,
            spec.amplitude_m,
            1.0,
            6.0,
            seed.wrapping_add(i as u64),
        );
        let cube = synthesize_cube(&scene, &cfg, &NoiseSpec::none(), seed.wrapping_add(i as u64))?;
        let estimates = run_pipeline(&cube, &pipeline)?;
        if let Some(est) = estimates.first() {
            measured.push(DiurnalSample {
                hours: sample.hours,
                frequency_hz: est.frequency_hz,
            });
        }
    }
    run.measured_samples = measured;
    Ok(run)
}
