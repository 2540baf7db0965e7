//! Multi-seed experiment runners behind the `evaluate` and `ablate`
//! commands and the verification suite.

use crate::error::Result;
use crate::harness::mae::{evaluate_mae, mae_with_miss_penalty, MaeReport, TrialOutcome};
use crate::harness::pipeline::{run_pipeline, PipelineConfig, PipelineVariant};
use crate::harness::scenes::{
    standard_chirp, standard_grid_trial, two_leaf_scene, GridTrial, STANDARD_BANDS,
    STANDARD_BAND_HZ, STANDARD_RANGE_LIMITS,
};
use crate::simulator::{synthesize_cube, IqCube, NoiseSpec};

/// Duration of the noisy-grid captures, s.
pub const GRID_DURATION_S: f64 = 4.0;

fn pipeline_config(variant: PipelineVariant, seed: u64) -> PipelineConfig {
    PipelineConfig::new(variant, STANDARD_BAND_HZ, STANDARD_RANGE_LIMITS).with_seed(seed)
}

fn run_trial(
    cube: &IqCube,
    trial: &GridTrial,
    variant: PipelineVariant,
    seed: u64,
) -> Result<TrialOutcome> {
    let estimates = run_pipeline(cube, &pipeline_config(variant, seed))?;
    Ok(TrialOutcome {
        truths_hz: trial.truths_hz.clone(),
        estimates_hz: estimates.iter().map(|e| e.frequency_hz).collect(),
    })
}

/// Banded MAE of one pipeline variant over the standard noisy grid
/// (single-leaf scenes across the four bands, one frequency draw per seed
/// and band).
pub fn run_noisy_grid(
    seeds: &[u64],
    noise: &NoiseSpec,
    variant: PipelineVariant,
) -> Result<MaeReport> {
    let cfg = standard_chirp();
    let mut trials = Vec::new();
    for &seed in seeds {
        for band in &STANDARD_BANDS {
            let trial = standard_grid_trial(&cfg, band, GRID_DURATION_S, seed);
            let cube = synthesize_cube(&trial.scene, &cfg, noise, seed)?;
            trials.push(run_trial(&cube, &trial, variant, seed)?);
        }
    }
    evaluate_mae(&trials, variant.name())
}

/// MAE of every ladder variant over one scene family; the capture is
/// synthesized once per trial and shared across variants.
#[derive(Debug, Clone)]
pub struct AblationOutcome {
    pub scene: &'static str,
    pub variant: PipelineVariant,
    /// MAE over matched truths only.
    pub matched_mae_hz: f64,
    /// Per-truth MAE with misses penalized; the ladder comparator.
    pub penalized_mae_hz: f64,
    pub n_trials: usize,
    pub misses: usize,
}

pub fn run_ablation(
    seeds: &[u64],
    noise: &NoiseSpec,
    two_leaf: bool,
) -> Result<Vec<AblationOutcome>> {
    let cfg = standard_chirp();
    let scene_name = if two_leaf { "two-leaf" } else { "single-leaf" };

    let mut per_variant: Vec<(PipelineVariant, Vec<TrialOutcome>)> = PipelineVariant::ALL
        .iter()
        .map(|&v| (v, Vec::new()))
        .collect();

    for &seed in seeds {
        let trials: Vec<GridTrial> = if two_leaf {
            vec![two_leaf_scene(&cfg, 6.0, seed)]
        } else {
            STANDARD_BANDS
                .iter()
                .map(|band| standard_grid_trial(&cfg, band, GRID_DURATION_S, seed))
                .collect()
        };
        for trial in &trials {
            let cube = synthesize_cube(&trial.scene, &cfg, noise, seed)?;
            for (variant, outcomes) in per_variant.iter_mut() {
                outcomes.push(run_trial(&cube, trial, *variant, seed)?);
            }
        }
    }

    per_variant
        .into_iter()
        .map(|(variant, outcomes)| {
            let report = evaluate_mae(&outcomes, variant.name())?;
            let all = report
                .band(crate::harness::mae::BandLabel::All)
                .expect("every grid truth lands in the All band");
            Ok(AblationOutcome {
                scene: scene_name,
                variant,
                matched_mae_hz: all.mae_hz,
                penalized_mae_hz: mae_with_miss_penalty(&outcomes, STANDARD_BAND_HZ),
                n_trials: outcomes.len(),
                misses: all.misses,
            })
        })
        .collect()
}
