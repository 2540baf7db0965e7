//! Chirp-repetition-time sweep: how the spacing between chirps affects the
//! spread of the phase differences and the frequency error.

use crate::error::{Error, Result};
use crate::harness::pipeline::phasediff_displacement;
use crate::harness::scenes::{single_leaf_scene, STANDARD_BAND_HZ, STANDARD_RANGE_LIMITS};
use crate::simulator::{synthesize_cube, ChirpConfig, NoiseSpec};
use crate::spectral::estimate_frequency;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Aggregate results at one repetition time.
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    pub repetition_time_us: f64,
    /// Median (over seeds) of the median per-frame IQR width, rad.
    pub median_iqr_rad: f64,
    pub mae_hz: f64,
    pub n_trials: usize,
}

/// Chirp profile at a given repetition time: the ramp stays fixed and the
/// idle time stretches; the frame period grows when the chirp burst no
/// longer fits, trading frame rate for chirp spacing.
pub fn sweep_chirp(repetition_time_us: f64) -> Result<ChirpConfig> {
    let base = ChirpConfig {
        adc_samples: 64,
        chirps_per_frame: 16,
        num_tx: 1,
        num_rx: 1,
        ..ChirpConfig::default()
    };
    let rep_s = repetition_time_us * 1e-6;
    if rep_s < base.ramp_time_s {
        return Err(Error::Config(format!(
            "repetition time {repetition_time_us} us shorter than the {} us ramp",
            base.ramp_time_s * 1e6
        )));
    }
    let burst = base.chirps_per_frame as f64 * rep_s;
    let cfg = ChirpConfig {
        idle_time_s: rep_s - base.ramp_time_s,
        frame_period_s: base.frame_period_s.max(burst * 1.05),
        ..base
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Sweep the repetition times over a fixed single-leaf scene.
///
/// Seeds share the same scene draw per seed index (common random numbers),
/// so differences across repetition times reflect the timing change rather
/// than scene variation.
pub fn sweep_chirp_repetition(times_us: &[f64], seeds: &[u64]) -> Result<Vec<SweepPoint>> {
    if times_us.is_empty() || seeds.is_empty() {
        return Err(Error::TooFew {
            what: "sweep points",
            needed: 1,
            got: 0,
        });
    }
    let noise = NoiseSpec::thermal(40.0);
    let duration = 6.0;

    times_us
        .iter()
        .map(|&t_us| {
            let cfg = sweep_chirp(t_us)?;
            let carrier = cfg.carrier_hz();
            let rate = cfg.frame_rate_hz();

            let outcomes: Vec<(f64, f64)> = seeds
                .par_iter()
                .map(|&seed| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x00c0_ffee);
                    let freq = 1.8 + rng.gen::<f64>() * 0.5;
                    let scene = single_leaf_scene(&cfg, freq, 0.8e-3, 1.0, duration, seed);
                    let cube = synthesize_cube(&scene, &cfg, &noise, seed)?;
                    let profile = crate::dsp::range_profile(&cube, crate::dsp::WindowKind::Hann)?;
                    let bin = crate::dsp::select_range_bin(&profile, STANDARD_RANGE_LIMITS)?;
                    let series = crate::dsp::extract_bin(&cube, bin, crate::dsp::WindowKind::Hann)?;
                    let (disp, cp) = phasediff_displacement(&series, 0, carrier, rate)?
                        .ok_or(Error::NoVibration {
                            lo_hz: STANDARD_BAND_HZ.0,
                            hi_hz: STANDARD_BAND_HZ.1,
                        })?;
                    let est = estimate_frequency(&disp, STANDARD_BAND_HZ)?;
                    Ok((cp.median_iqr_width(), (est.frequency_hz - freq).abs()))
                })
                .collect::<Result<Vec<_>>>()?;

            let mut widths: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
            widths.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mae = outcomes.iter().map(|o| o.1).sum::<f64>() / outcomes.len() as f64;
            Ok(SweepPoint {
                repetition_time_us: t_us,
                median_iqr_rad: widths[widths.len() / 2],
                mae_hz: mae,
                n_trials: outcomes.len(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_config_timing() {
        let cfg = sweep_chirp(50.0).unwrap();
        assert!((cfg.chirp_repetition_time_s() - 50e-6).abs() < 1e-12);
        assert_eq!(cfg.frame_period_s, 8e-3);

        // 3200 us x 16 chirps no longer fits an 8 ms frame.
        let cfg = sweep_chirp(3200.0).unwrap();
        assert!((cfg.chirp_repetition_time_s() - 3.2e-3).abs() < 1e-12);
        assert!(cfg.frame_period_s > 8e-3);
        assert!(
            cfg.chirps_per_frame as f64 * cfg.chirp_repetition_time_s() <= cfg.frame_period_s
        );

        assert!(sweep_chirp(10.0).is_err());
    }
}
