//! FMCW waveform configuration and derived quantities.

use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;
use serde::{Deserialize, Serialize};

/// FMCW chirp and frame parameters.
///
/// Defaults match a 77 GHz automotive radar profile: 99.987 MHz/us slope,
/// 40 us ramps, 256 ADC samples at 10 Msps, 128 chirps per 8 ms frame,
/// 3 Tx x 4 Rx antennas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChirpConfig {
    /// Chirp start frequency, Hz.
    pub start_freq_hz: f64,
    /// Frequency slope, Hz/s.
    pub slope_hz_per_s: f64,
    /// Idle time between ramps, s.
    pub idle_time_s: f64,
    /// ADC sample rate, samples/s.
    pub adc_rate_sps: f64,
    /// Delay from ramp start to first ADC sample, s.
    pub adc_start_s: f64,
    /// Chirps per frame (slow-time length within a frame).
    pub chirps_per_frame: usize,
    /// Ramp duration, s.
    pub ramp_time_s: f64,
    /// ADC samples per chirp (fast-time length).
    pub adc_samples: usize,
    /// Frame repetition period, s.
    pub frame_period_s: f64,
    /// Transmit antennas.
    pub num_tx: usize,
    /// Receive antennas.
    pub num_rx: usize,
}

impl Default for ChirpConfig {
    fn default() -> Self {
        Self {
            start_freq_hz: 77.0e9,
            slope_hz_per_s: 99.987e12,
            idle_time_s: 7.0e-6,
            adc_rate_sps: 10.0e6,
            adc_start_s: 7.0e-6,
            chirps_per_frame: 128,
            ramp_time_s: 40.0e-6,
            adc_samples: 256,
            frame_period_s: 8.0e-3,
            num_tx: 3,
            num_rx: 4,
        }
    }
}

impl ChirpConfig {
    /// Bandwidth swept over the full ramp, Hz.
    pub fn swept_bandwidth_hz(&self) -> f64 {
        self.slope_hz_per_s * self.ramp_time_s
    }

    /// Bandwidth covered while the ADC is sampling, Hz. This is the
    /// bandwidth that sets the range resolution.
    pub fn sampled_bandwidth_hz(&self) -> f64 {
        self.slope_hz_per_s * self.adc_samples as f64 / self.adc_rate_sps
    }

    /// Range extent of one FFT bin, m: c * f_adc / (2 * slope * N_adc).
    pub fn range_resolution_m(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.sampled_bandwidth_hz())
    }

    /// Largest range representable before the beat frequency aliases, m.
    pub fn max_range_m(&self) -> f64 {
        self.range_resolution_m() * self.adc_samples as f64
    }

    /// Time between consecutive chirp starts, s.
    pub fn chirp_repetition_time_s(&self) -> f64 {
        self.idle_time_s + self.ramp_time_s
    }

    /// Frame rate (slow-time sample rate along frames), Hz.
    pub fn frame_rate_hz(&self) -> f64 {
        1.0 / self.frame_period_s
    }

    /// Virtual antenna count: num_tx * num_rx.
    pub fn virtual_antennas(&self) -> usize {
        self.num_tx * self.num_rx
    }

    /// Carrier frequency used for phase-displacement conversion: the
    /// frequency at the centre of the sampled band.
    pub fn carrier_hz(&self) -> f64 {
        self.start_freq_hz
            + self.slope_hz_per_s
                * (self.adc_start_s + self.adc_samples as f64 / (2.0 * self.adc_rate_sps))
    }

    /// Carrier wavelength, m.
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz()
    }

    /// Map a range in metres to the nearest FFT bin.
    pub fn range_to_bin(&self, range_m: f64) -> usize {
        (range_m / self.range_resolution_m()).round() as usize
    }

    /// Start time of chirp `l` of frame `n`, measured at the first ADC sample.
    pub fn chirp_timestamp_s(&self, frame: usize, chirp: usize) -> f64 {
        frame as f64 * self.frame_period_s
            + chirp as f64 * self.chirp_repetition_time_s()
            + self.adc_start_s
    }

    /// Check internal timing consistency.
    pub fn validate(&self) -> Result<()> {
        if self.adc_samples < 2 {
            return Err(Error::Config(format!(
                "need at least 2 ADC samples, got {}",
                self.adc_samples
            )));
        }
        if self.chirps_per_frame < 1 {
            return Err(Error::Config("need at least one chirp per frame".into()));
        }
        for (name, v) in [
            ("start frequency", self.start_freq_hz),
            ("slope", self.slope_hz_per_s),
            ("ADC rate", self.adc_rate_sps),
            ("ramp time", self.ramp_time_s),
            ("frame period", self.frame_period_s),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.idle_time_s < 0.0 || self.adc_start_s < 0.0 {
            return Err(Error::Config("idle and ADC start times must be non-negative".into()));
        }
        let sample_window = self.adc_start_s + self.adc_samples as f64 / self.adc_rate_sps;
        if sample_window > self.ramp_time_s + 1e-12 {
            return Err(Error::Config(format!(
                "ADC window ({:.2} us) extends past the ramp ({:.2} us)",
                sample_window * 1e6,
                self.ramp_time_s * 1e6
            )));
        }
        let burst = self.chirps_per_frame as f64 * self.chirp_repetition_time_s();
        if burst > self.frame_period_s + 1e-12 {
            return Err(Error::Config(format!(
                "chirp burst ({:.3} ms) overflows the frame period ({:.3} ms)",
                burst * 1e3,
                self.frame_period_s * 1e3
            )));
        }
        if self.num_tx == 0 || self.num_rx == 0 {
            return Err(Error::Config("need at least one Tx and one Rx antenna".into()));
        }
        Ok(())
    }
}
