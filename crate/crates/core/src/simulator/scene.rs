//! Scene description: scatterers, their motion, and the noise model.

use crate::error::{Error, Result};
use crate::mechanics::OscillatorParams;
use crate::simulator::ChirpConfig;
use serde::{Deserialize, Serialize};

/// Motion model of a scatterer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Motion {
    /// Fixed reflector (wall, pot, trunk at rest).
    Static,
    /// Impulse-excited damped oscillator.
    Oscillator(OscillatorParams),
}

/// One point reflector in the scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scatterer {
    /// Distance from the radar, m.
    pub range_m: f64,
    /// Reflected amplitude (linear, arbitrary units).
    pub rcs_gain: f64,
    pub motion: Motion,
    /// Per-virtual-antenna coupling weights. `None` means unit gain on
    /// every antenna. For multi-source scenes these are the columns of the
    /// antenna mixing matrix.
    pub antenna_gains: Option<Vec<f64>>,
}

impl Scatterer {
    pub fn static_at(range_m: f64, rcs_gain: f64) -> Self {
        Self {
            range_m,
            rcs_gain,
            motion: Motion::Static,
            antenna_gains: None,
        }
    }

    pub fn vibrating(range_m: f64, rcs_gain: f64, osc: OscillatorParams) -> Self {
        Self {
            range_m,
            rcs_gain,
            motion: Motion::Oscillator(osc),
            antenna_gains: None,
        }
    }

    pub fn with_antenna_gains(mut self, gains: Vec<f64>) -> Self {
        self.antenna_gains = Some(gains);
        self
    }

    pub fn gain_for_antenna(&self, antenna: usize) -> f64 {
        match &self.antenna_gains {
            Some(g) => g.get(antenna).copied().unwrap_or(0.0),
            None => 1.0,
        }
    }

    pub fn is_dynamic(&self) -> bool {
        matches!(self.motion, Motion::Oscillator(_))
    }
}

/// Additive noise model for the synthesized capture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseSpec {
    /// Per-sample SNR in dB relative to the strongest scatterer return.
    /// `None` disables thermal noise.
    pub snr_db: Option<f64>,
    /// Standard deviation of the per-chirp phase signature: one zero-mean
    /// Gaussian offset per chirp slot, drawn per capture and held fixed
    /// across frames (common to all antennas and samples of that chirp).
    /// The offsets differ chirp to chirp, so the inter-chirp phase
    /// differences carry heavy tails for the interquartile reduction to
    /// reject.
    pub phase_jitter_std_rad: f64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self {
            snr_db: None,
            phase_jitter_std_rad: 0.0,
        }
    }

    pub fn thermal(snr_db: f64) -> Self {
        Self {
            snr_db: Some(snr_db),
            phase_jitter_std_rad: 0.0,
        }
    }

    pub fn with_jitter(mut self, std_rad: f64) -> Self {
        self.phase_jitter_std_rad = std_rad;
        self
    }

    pub fn is_noiseless(&self) -> bool {
        self.snr_db.is_none() && self.phase_jitter_std_rad == 0.0
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::none()
    }
}

/// Complete scene: scatterer list plus capture length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub scatterers: Vec<Scatterer>,
    /// Capture duration, s. The frame count is duration / frame period.
    pub duration_s: f64,
    /// Allow multiple scatterers inside one range bin. Required for
    /// multi-source separation scenes; rejected otherwise so that
    /// accidental bin collisions fail loudly.
    #[serde(default)]
    pub allow_co_bin: bool,
}

impl SceneSpec {
    pub fn new(scatterers: Vec<Scatterer>, duration_s: f64) -> Self {
        Self {
            scatterers,
            duration_s,
            allow_co_bin: false,
        }
    }

    pub fn co_bin(mut self) -> Self {
        self.allow_co_bin = true;
        self
    }

    pub fn num_frames(&self, cfg: &ChirpConfig) -> usize {
        (self.duration_s / cfg.frame_period_s).round() as usize
    }

    pub fn validate(&self, cfg: &ChirpConfig) -> Result<()> {
        cfg.validate()?;
        if !(self.duration_s > 0.0) {
            return Err(Error::Config(format!(
                "duration must be positive, got {}",
                self.duration_s
            )));
        }
        let n_ant = cfg.virtual_antennas();
        for (i, sc) in self.scatterers.iter().enumerate() {
            if !(sc.range_m >= 0.0) || sc.range_m >= cfg.max_range_m() {
                return Err(Error::Config(format!(
                    "scatterer {i} range {} m outside [0, {:.2}) m",
                    sc.range_m,
                    cfg.max_range_m()
                )));
            }
            if !(sc.rcs_gain > 0.0) {
                return Err(Error::Config(format!(
                    "scatterer {i} needs a positive rcs_gain, got {}",
                    sc.rcs_gain
                )));
            }
            if let Some(g) = &sc.antenna_gains {
                if g.len() != n_ant {
                    return Err(Error::Config(format!(
                        "scatterer {i} has {} antenna gains, config has {n_ant} antennas",
                        g.len()
                    )));
                }
                if g.iter().any(|&x| x < 0.0 || !x.is_finite()) {
                    return Err(Error::Config(format!(
                        "scatterer {i} antenna gains must be finite and non-negative"
                    )));
                }
                if sc.is_dynamic() && g.iter().all(|&x| x == 0.0) {
                    return Err(Error::Config(format!(
                        "dynamic scatterer {i} has all-zero antenna gains"
                    )));
                }
            }
            if let Motion::Oscillator(osc) = &sc.motion {
                let zeta = osc.damping_ratio();
                if zeta >= 1.0 {
                    return Err(Error::Overdamped { zeta });
                }
            }
        }
        if !self.allow_co_bin {
            let res = cfg.range_resolution_m();
            for i in 0..self.scatterers.len() {
                for j in (i + 1)..self.scatterers.len() {
                    let d = (self.scatterers[i].range_m - self.scatterers[j].range_m).abs();
                    if d < res {
                        return Err(Error::Config(format!(
                            "scatterers {i} and {j} are {d:.3} m apart (< one range \
                             resolution); set allow_co_bin for co-located sources"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// On-disk scene configuration: chirp parameters, noise, scatterer blocks.
/// Serialized as TOML with one `[[scatterer]]` table per reflector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    #[serde(default)]
    pub chirp: ChirpConfig,
    #[serde(default)]
    pub noise: NoiseSpec,
    pub duration_s: f64,
    #[serde(default)]
    pub allow_co_bin: bool,
    #[serde(rename = "scatterer")]
    pub scatterers: Vec<Scatterer>,
}

impl SceneFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn scene(&self) -> SceneSpec {
        SceneSpec {
            scatterers: self.scatterers.clone(),
            duration_s: self.duration_s,
            allow_co_bin: self.allow_co_bin,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanics::presets;

    #[test]
    fn validates_ranges_and_gains() {
        let cfg = ChirpConfig::default();
        let scene = SceneSpec::new(vec![Scatterer::static_at(-0.1, 1.0)], 1.0);
        assert!(scene.validate(&cfg).is_err());

        let scene = SceneSpec::new(vec![Scatterer::static_at(100.0, 1.0)], 1.0);
        assert!(scene.validate(&cfg).is_err());

        let leaf = Scatterer::vibrating(0.5, 1.0, presets::watered(1e-3, 0.0))
            .with_antenna_gains(vec![0.0; 12]);
        let scene = SceneSpec::new(vec![leaf], 1.0);
        assert!(scene.validate(&cfg).is_err());
    }

    #[test]
    fn co_bin_requires_flag() {
        let cfg = ChirpConfig::default();
        let scene = SceneSpec::new(
            vec![
                Scatterer::static_at(0.50, 1.0),
                Scatterer::static_at(0.51, 1.0),
            ],
            1.0,
        );
        assert!(scene.validate(&cfg).is_err());
        assert!(scene.co_bin().validate(&cfg).is_ok());
    }

    #[test]
    fn scene_file_round_trips_through_toml() {
        let file = SceneFile {
            chirp: ChirpConfig::default(),
            noise: NoiseSpec::thermal(20.0).with_jitter(0.3),
            duration_s: 6.0,
            allow_co_bin: false,
            scatterers: vec![
                Scatterer::static_at(1.56, 3.0),
                Scatterer::vibrating(0.4, 1.0, presets::watered(1e-3, 0.25)),
            ],
        };
        let text = file.to_toml_string().unwrap();
        let parsed = SceneFile::from_toml_str(&text).unwrap();
        assert_eq!(parsed, file);
    }
}
