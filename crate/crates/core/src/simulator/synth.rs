//! Baseband I/Q synthesis of a scene under a chirp configuration.

use crate::error::{Error, Result};
use crate::mechanics::damped_response;
use crate::simulator::{ChirpConfig, Motion, NoiseSpec, SceneSpec};
use crate::SPEED_OF_LIGHT;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

/// Complex baseband capture indexed `[frame][chirp][adc sample][antenna]`
/// with the antenna axis fastest. Values are the analog signal model in
/// linear amplitude units; quantization happens in the raw file writer.
#[derive(Debug, Clone, PartialEq)]
pub struct IqCube {
    pub data: Vec<Complex64>,
    pub frames: usize,
    pub config: ChirpConfig,
}

impl IqCube {
    pub fn zeroed(frames: usize, config: ChirpConfig) -> Self {
        let n = frames
            * config.chirps_per_frame
            * config.adc_samples
            * config.virtual_antennas();
        Self {
            data: vec![Complex64::new(0.0, 0.0); n],
            frames,
            config,
        }
    }

    #[inline]
    pub fn index(&self, frame: usize, chirp: usize, sample: usize, antenna: usize) -> usize {
        let c = &self.config;
        ((frame * c.chirps_per_frame + chirp) * c.adc_samples + sample)
            * c.virtual_antennas()
            + antenna
    }

    #[inline]
    pub fn at(&self, frame: usize, chirp: usize, sample: usize, antenna: usize) -> Complex64 {
        self.data[self.index(frame, chirp, sample, antenna)]
    }

    /// Samples of one chirp on one antenna, gathered across the fast-time axis.
    pub fn chirp_samples(&self, frame: usize, chirp: usize, antenna: usize) -> Vec<Complex64> {
        (0..self.config.adc_samples)
            .map(|s| self.at(frame, chirp, s, antenna))
            .collect()
    }

    pub fn samples_per_frame(config: &ChirpConfig) -> usize {
        config.chirps_per_frame * config.adc_samples * config.virtual_antennas()
    }

    pub fn total_samples(&self) -> usize {
        self.data.len()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Beat frequency of a reflector at distance `d`: 2 d BW / (c T_r) with the
/// full swept bandwidth over the ramp, i.e. 2 d slope / c. One range
/// resolution step moves the beat by exactly one FFT bin.
pub fn beat_frequency(range_m: f64, cfg: &ChirpConfig) -> f64 {
    2.0 * range_m * cfg.slope_hz_per_s / SPEED_OF_LIGHT
}

/// Two-way phase shift of a displacement `delta_d` at the given carrier:
/// 4 pi * delta_d * f / c.
pub fn phase_from_displacement(delta_d_m: f64, carrier_hz: f64) -> f64 {
    4.0 * std::f64::consts::PI * delta_d_m * carrier_hz / SPEED_OF_LIGHT
}

/// Peak return amplitude over all scatterers and antennas; reference level
/// for the thermal-noise SNR.
fn strongest_return(scene: &SceneSpec, antennas: usize) -> f64 {
    scene
        .scatterers
        .iter()
        .map(|sc| {
            let g_max = (0..antennas)
                .map(|a| sc.gain_for_antenna(a))
                .fold(0.0_f64, f64::max);
            sc.rcs_gain * g_max
        })
        .fold(0.0_f64, f64::max)
}

/// Synthesize the baseband capture of `scene`.
///
/// Deterministic for a fixed seed: every frame draws from its own counter
/// substream, so the output is independent of parallel scheduling. Motion
/// is frozen within each chirp (stop-and-hop): a scatterer's displacement
/// is evaluated once at the chirp timestamp and enters as a phase offset on
/// its beat tone, so the recentered phase at the range bin reproduces the
/// commanded displacement exactly at zero noise.
pub fn synthesize_cube(
    scene: &SceneSpec,
    cfg: &ChirpConfig,
    noise: &NoiseSpec,
    seed: u64,
) -> Result<IqCube> {
    scene.validate(cfg)?;
    if let Some(snr) = noise.snr_db {
        if !snr.is_finite() {
            return Err(Error::Config(format!("SNR must be finite, got {snr}")));
        }
    }
    if !(noise.phase_jitter_std_rad >= 0.0) {
        return Err(Error::Config(format!(
            "phase jitter std must be non-negative, got {}",
            noise.phase_jitter_std_rad
        )));
    }

    let frames = scene.num_frames(cfg);
    if frames == 0 {
        return Err(Error::Config(format!(
            "duration {} s is shorter than one frame period",
            scene.duration_s
        )));
    }

    let n_ant = cfg.virtual_antennas();
    let n_chirps = cfg.chirps_per_frame;
    let n_samples = cfg.adc_samples;
    let carrier = cfg.carrier_hz();
    let frame_len = IqCube::samples_per_frame(cfg);

    // Per-scatterer constants: beat-tone step per ADC sample, geometric
    // return phase, per-antenna weights.
    struct Return {
        step: Complex64,
        base_phase: f64,
        weights: Vec<f64>,
        motion: Motion,
    }
    let returns: Vec<Return> = scene
        .scatterers
        .iter()
        .map(|sc| {
            let f_beat = beat_frequency(sc.range_m, cfg);
            let dphi = 2.0 * std::f64::consts::PI * f_beat / cfg.adc_rate_sps;
            Return {
                step: Complex64::from_polar(1.0, dphi),
                base_phase: phase_from_displacement(sc.range_m, carrier),
                weights: (0..n_ant)
                    .map(|a| sc.rcs_gain * sc.gain_for_antenna(a))
                    .collect(),
                motion: sc.motion,
            }
        })
        .collect();

    let noise_sigma = noise.snr_db.map(|snr| {
        let a_max = strongest_return(scene, n_ant);
        // Complex circular Gaussian: total noise power a_max^2 * 10^(-snr/10)
        // split evenly between I and Q.
        a_max * 10f64.powf(-snr / 20.0) / std::f64::consts::SQRT_2
    });

    // Per-chirp phase signature, one draw per capture (stream 0).
    let jitter: Vec<f64> = if noise.phase_jitter_std_rad > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(0);
        let dist = Normal::new(0.0, noise.phase_jitter_std_rad).unwrap();
        (0..n_chirps).map(|_| dist.sample(&mut rng)).collect()
    } else {
        vec![0.0; n_chirps]
    };

    let mut data = vec![Complex64::new(0.0, 0.0); frames * frame_len];

    data.par_chunks_mut(frame_len)
        .enumerate()
        .for_each(|(frame, out)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(frame as u64 + 1);

            for chirp in 0..n_chirps {
                let t = cfg.chirp_timestamp_s(frame, chirp);
                let chirp_base = chirp * n_samples * n_ant;
                for ret in &returns {
                    let motion_phase = match &ret.motion {
                        Motion::Static => 0.0,
                        Motion::Oscillator(osc) => {
                            let d = damped_response(osc, t).expect("scene validated");
                            phase_from_displacement(d, carrier)
                        }
                    };
                    let mut tone = Complex64::from_polar(
                        1.0,
                        ret.base_phase + motion_phase + jitter[chirp],
                    );
                    for sample in 0..n_samples {
                        let base = chirp_base + sample * n_ant;
                        for (a, &w) in ret.weights.iter().enumerate() {
                            if w != 0.0 {
                                out[base + a] += w * tone;
                            }
                        }
                        tone *= ret.step;
                    }
                }
            }

            if let Some(sigma) = noise_sigma {
                let dist = Normal::new(0.0, sigma).unwrap();
                for slot in out.iter_mut() {
                    let re: f64 = dist.sample(&mut rng);
                    let im: f64 = dist.sample(&mut rng);
                    *slot += Complex64::new(re, im);
                }
            }
        });

    Ok(IqCube {
        data,
        frames,
        config: *cfg,
    })
}
