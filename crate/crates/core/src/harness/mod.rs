//! End-to-end orchestration: pipeline variants, MAE evaluation, parameter
//! sweeps, and the synthetic drought/diurnal experiment.

mod diurnal;
mod drought;
mod experiments;
mod mae;
mod pipeline;
mod report;
mod scenes;
mod sweep;

pub use diurnal::{diurnal_delta, DayDelta, DiurnalSample, DiurnalSeries};
pub use drought::{generate_drought_series, run_drought_experiment, DroughtRun, DroughtSpec};
pub use experiments::{run_ablation, run_noisy_grid, AblationOutcome, GRID_DURATION_S};
pub use mae::{evaluate_mae, mae_with_miss_penalty, BandLabel, MaeReport, MaeRow, TrialOutcome};
pub use pipeline::{phasediff_displacement, run_pipeline, PipelineConfig, PipelineVariant};
pub use report::{
    ablation_csv, diurnal_csv, estimates_csv, mae_csv, spectrum_csv, sweep_csv, CSV_SCHEMA_VERSION,
};
pub use scenes::{
    recovery_chirp,
    compact_chirp, single_leaf_scene, standard_chirp, standard_grid_trial, standard_noise,
    two_leaf_noise, two_leaf_scene, two_leaf_trial, GridBand, GridTrial, LEAF_ZETA,
    STANDARD_BANDS, STANDARD_BAND_HZ, STANDARD_RANGE_LIMITS, TWO_LEAF_FREQS,
};
pub use sweep::{sweep_chirp, sweep_chirp_repetition, SweepPoint};
