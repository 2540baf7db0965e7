//! Range FFT, energy profile, and bin selection.

use crate::dsp::WindowKind;
use crate::error::{Error, Result};
use crate::simulator::{ChirpConfig, IqCube};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place forward FFT (rustfft convention: unnormalized).
pub fn fft_forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| {
        let fft = p.borrow_mut().plan_fft_forward(buf.len());
        fft.process(buf);
    });
}

/// Reflected energy per range bin, summed over frames, chirps, and antennas.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeProfile {
    /// |FFT|^2 accumulated over every chirp of every frame and antenna.
    pub energy_per_bin: Vec<f64>,
    /// Physical width of one bin, m.
    pub bin_width_m: f64,
}

/// Centre range of each FFT bin, m.
pub fn range_axis(cfg: &ChirpConfig) -> Vec<f64> {
    let res = cfg.range_resolution_m();
    (0..cfg.adc_samples).map(|k| k as f64 * res).collect()
}

fn windowed_chirp(samples: &[Complex64], window: WindowKind) -> Vec<Complex64> {
    let n = samples.len();
    samples
        .iter()
        .enumerate()
        .map(|(i, &z)| z * window.coefficient(i, n))
        .collect()
}

/// Full range FFT of the cube: `[frame][chirp][bin][antenna]`, same layout
/// as the input. Intended for small cubes and tests; the pipeline uses
/// [`range_profile`] and [`extract_bin`] to avoid materializing this.
pub fn range_fft(cube: &IqCube, window: WindowKind) -> Result<Vec<Complex64>> {
    if cube.config.adc_samples < 2 {
        return Err(Error::TooFew {
            what: "ADC samples",
            needed: 2,
            got: cube.config.adc_samples,
        });
    }
    if !cube.is_finite() {
        return Err(Error::NonFinite("range FFT input"));
    }
    let cfg = &cube.config;
    let n_ant = cfg.virtual_antennas();
    let mut out = vec![Complex64::new(0.0, 0.0); cube.data.len()];
    for frame in 0..cube.frames {
        for chirp in 0..cfg.chirps_per_frame {
            for ant in 0..n_ant {
                let mut buf = windowed_chirp(&cube.chirp_samples(frame, chirp, ant), window);
                fft_forward(&mut buf);
                for (bin, z) in buf.into_iter().enumerate() {
                    out[cube.index(frame, chirp, bin, ant)] = z;
                }
            }
        }
    }
    Ok(out)
}

/// Accumulate |FFT|^2 across all frames, chirps, and antennas into one
/// energy-per-bin profile.
pub fn range_profile(cube: &IqCube, window: WindowKind) -> Result<RangeProfile> {
    if cube.config.adc_samples < 2 {
        return Err(Error::TooFew {
            what: "ADC samples",
            needed: 2,
            got: cube.config.adc_samples,
        });
    }
    if !cube.is_finite() {
        return Err(Error::NonFinite("range profile input"));
    }
    let cfg = cube.config;
    let n_ant = cfg.virtual_antennas();
    let n_bins = cfg.adc_samples;

    let energy = (0..cube.frames)
        .into_par_iter()
        .map(|frame| {
            let mut acc = vec![0.0_f64; n_bins];
            for chirp in 0..cfg.chirps_per_frame {
                for ant in 0..n_ant {
                    let mut buf =
                        windowed_chirp(&cube.chirp_samples(frame, chirp, ant), window);
                    fft_forward(&mut buf);
                    for (bin, z) in buf.iter().enumerate() {
                        acc[bin] += z.norm_sqr();
                    }
                }
            }
            acc
        })
        .reduce(
            || vec![0.0_f64; n_bins],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    Ok(RangeProfile {
        energy_per_bin: energy,
        bin_width_m: cfg.range_resolution_m(),
    })
}

/// Highest-energy bin whose centre range lies inside `[min_m, max_m]`.
/// Ties break toward the nearer range.
pub fn select_range_bin(profile: &RangeProfile, limits: (f64, f64)) -> Result<usize> {
    let (min_m, max_m) = limits;
    if !(min_m < max_m) {
        return Err(Error::InvalidParameter(format!(
            "range limits must satisfy min < max, got [{min_m}, {max_m}]"
        )));
    }
    let mut best: Option<(usize, f64)> = None;
    for (bin, &e) in profile.energy_per_bin.iter().enumerate() {
        let r = bin as f64 * profile.bin_width_m;
        if r < min_m || r > max_m {
            continue;
        }
        match best {
            // Strict comparison keeps the nearest bin on ties.
            Some((_, e_best)) if e <= e_best => {}
            _ => best = Some((bin, e)),
        }
    }
    let (bin, energy) = best.ok_or(Error::EmptyRangeWindow { min_m, max_m })?;
    if energy == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    Ok(bin)
}

/// Complex samples of one range bin across the whole capture, per antenna.
#[derive(Debug, Clone)]
pub struct BinSeries {
    /// `per_antenna[a][frame * chirps + chirp]`.
    pub per_antenna: Vec<Vec<Complex64>>,
    pub bin: usize,
    pub frames: usize,
    pub chirps: usize,
}

impl BinSeries {
    #[inline]
    pub fn value(&self, antenna: usize, frame: usize, chirp: usize) -> Complex64 {
        self.per_antenna[antenna][frame * self.chirps + chirp]
    }
}

/// Evaluate a single FFT bin for every (frame, chirp, antenna) without a
/// full FFT: one windowed DFT projection per chirp.
pub fn extract_bin(cube: &IqCube, bin: usize, window: WindowKind) -> Result<BinSeries> {
    let cfg = cube.config;
    let n = cfg.adc_samples;
    if bin >= n {
        return Err(Error::InvalidParameter(format!(
            "bin {bin} outside the {n}-bin profile"
        )));
    }
    let n_ant = cfg.virtual_antennas();
    // Conjugated DFT basis row for the requested bin, window folded in.
    let basis: Vec<Complex64> = (0..n)
        .map(|s| {
            let angle = -2.0 * std::f64::consts::PI * bin as f64 * s as f64 / n as f64;
            Complex64::from_polar(window.coefficient(s, n), angle)
        })
        .collect();

    let per_frame: Vec<Vec<Complex64>> = (0..cube.frames)
        .into_par_iter()
        .map(|frame| {
            let mut vals = vec![Complex64::new(0.0, 0.0); cfg.chirps_per_frame * n_ant];
            for chirp in 0..cfg.chirps_per_frame {
                for ant in 0..n_ant {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for s in 0..n {
                        acc += cube.at(frame, chirp, s, ant) * basis[s];
                    }
                    vals[chirp * n_ant + ant] = acc;
                }
            }
            vals
        })
        .collect();

    let mut per_antenna = vec![Vec::with_capacity(cube.frames * cfg.chirps_per_frame); n_ant];
    for (_, frame_vals) in per_frame.iter().enumerate() {
        for chirp in 0..cfg.chirps_per_frame {
            for (ant, series) in per_antenna.iter_mut().enumerate() {
                series.push(frame_vals[chirp * n_ant + ant]);
            }
        }
    }
    Ok(BinSeries {
        per_antenna,
        bin,
        frames: cube.frames,
        chirps: cfg.chirps_per_frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{synthesize_cube, NoiseSpec, Scatterer, SceneSpec};
    use approx::assert_relative_eq;

    fn tone_cube(bin: usize, cfg: &ChirpConfig) -> IqCube {
        // Pure complex exponential at an exact bin frequency.
        let mut cube = IqCube::zeroed(1, *cfg);
        let n = cfg.adc_samples;
        for chirp in 0..cfg.chirps_per_frame {
            for s in 0..n {
                let angle = 2.0 * std::f64::consts::PI * bin as f64 * s as f64 / n as f64;
                let z = Complex64::from_polar(1.0, angle);
                for a in 0..cfg.virtual_antennas() {
                    let idx = cube.index(0, chirp, s, a);
                    cube.data[idx] = z;
                }
            }
        }
        cube
    }

    fn small_cfg() -> ChirpConfig {
        ChirpConfig {
            chirps_per_frame: 2,
            adc_samples: 64,
            num_tx: 1,
            num_rx: 1,
            ..ChirpConfig::default()
        }
    }

    #[test]
    fn pure_tone_hits_single_bin() {
        let cfg = small_cfg();
        let cube = tone_cube(9, &cfg);
        let out = range_fft(&cube, WindowKind::Rectangular).unwrap();
        for bin in 0..cfg.adc_samples {
            let v = out[cube.index(0, 0, bin, 0)].norm();
            if bin == 9 {
                assert_relative_eq!(v, cfg.adc_samples as f64, max_relative = 1e-9);
            } else {
                assert!(v < 1e-9, "leakage at bin {bin}: {v}");
            }
        }
    }

    #[test]
    fn parseval_rectangular() {
        let cfg = small_cfg();
        let scene = SceneSpec::new(vec![Scatterer::static_at(0.8, 1.0)], cfg.frame_period_s);
        let cube = synthesize_cube(&scene, &cfg, &NoiseSpec::thermal(10.0), 3).unwrap();
        let out = range_fft(&cube, WindowKind::Rectangular).unwrap();
        let time_energy: f64 = (0..cfg.adc_samples)
            .map(|s| cube.at(0, 0, s, 0).norm_sqr())
            .sum();
        let freq_energy: f64 = (0..cfg.adc_samples)
            .map(|k| out[cube.index(0, 0, k, 0)].norm_sqr())
            .sum::<f64>()
            / cfg.adc_samples as f64;
        assert_relative_eq!(time_energy, freq_energy, max_relative = 1e-10);
    }

    #[test]
    fn scatterer_peaks_at_expected_bin() {
        // Default config: 0.5 m sits at bin round(0.5 / 0.0586) = 9.
        let cfg = ChirpConfig {
            chirps_per_frame: 2,
            num_tx: 1,
            num_rx: 1,
            ..ChirpConfig::default()
        };
        let scene = SceneSpec::new(vec![Scatterer::static_at(0.5, 1.0)], cfg.frame_period_s);
        let cube = synthesize_cube(&scene, &cfg, &NoiseSpec::none(), 0).unwrap();
        let profile = range_profile(&cube, WindowKind::Hann).unwrap();
        let peak = profile
            .energy_per_bin
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert_eq!(peak, 9);
        assert_eq!(cfg.range_to_bin(0.5), 9);
    }

    #[test]
    fn bin_selection_respects_limits_and_ties() {
        // Leaf at 0.40 m, stronger wall at 1.56 m; limits cut the wall out.
        let cfg = ChirpConfig {
            chirps_per_frame: 2,
            num_tx: 1,
            num_rx: 1,
            ..ChirpConfig::default()
        };
        let scene = SceneSpec::new(
            vec![
                Scatterer::static_at(0.40, 1.0),
                Scatterer::static_at(1.56, 3.0),
            ],
            cfg.frame_period_s,
        );
        let cube = synthesize_cube(&scene, &cfg, &NoiseSpec::none(), 0).unwrap();
        let profile = range_profile(&cube, WindowKind::Hann).unwrap();
        let bin = select_range_bin(&profile, (0.2, 1.2)).unwrap();
        assert_eq!(bin, cfg.range_to_bin(0.40));
        // Without limits the wall wins.
        let bin = select_range_bin(&profile, (0.0, 3.0)).unwrap();
        assert_eq!(bin, cfg.range_to_bin(1.56));

        // Uniform energy: nearest in-limit bin wins the tie.
        let flat = RangeProfile {
            energy_per_bin: vec![1.0; 32],
            bin_width_m: 0.1,
        };
        assert_eq!(select_range_bin(&flat, (0.45, 1.3)).unwrap(), 5);

        // Limits excluding every bin error out.
        assert!(matches!(
            select_range_bin(&flat, (10.0, 11.0)),
            Err(Error::EmptyRangeWindow { .. })
        ));
        let dead = RangeProfile {
            energy_per_bin: vec![0.0; 32],
            bin_width_m: 0.1,
        };
        assert!(matches!(
            select_range_bin(&dead, (0.0, 3.0)),
            Err(Error::ZeroEnergy)
        ));
    }

    #[test]
    fn select_range_bin_scale_invariant() {
        let profile = RangeProfile {
            energy_per_bin: (0..32).map(|i| ((i * 7919) % 101) as f64).collect(),
            bin_width_m: 0.05,
        };
        let scaled = RangeProfile {
            energy_per_bin: profile.energy_per_bin.iter().map(|e| e * 123.4).collect(),
            bin_width_m: 0.05,
        };
        assert_eq!(
            select_range_bin(&profile, (0.1, 1.5)).unwrap(),
            select_range_bin(&scaled, (0.1, 1.5)).unwrap()
        );
    }

    #[test]
    fn extract_bin_matches_full_fft() {
        let cfg = small_cfg();
        let scene = SceneSpec::new(vec![Scatterer::static_at(0.8, 1.0)], cfg.frame_period_s);
        let cube = synthesize_cube(&scene, &cfg, &NoiseSpec::thermal(15.0), 5).unwrap();
        let full = range_fft(&cube, WindowKind::Hann).unwrap();
        let bin = 3;
        let series = extract_bin(&cube, bin, WindowKind::Hann).unwrap();
        for chirp in 0..cfg.chirps_per_frame {
            let a = series.value(0, 0, chirp);
            let b = full[cube.index(0, chirp, bin, 0)];
            assert!((a - b).norm() < 1e-9);
        }
    }
}
