//! Uniformly sampled displacement time series.

/// Displacement samples in metres at a fixed sample rate (the radar frame
/// rate for pipeline outputs).
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementSeries {
    pub samples_m: Vec<f64>,
    pub sample_rate_hz: f64,
}

impl DisplacementSeries {
    pub fn new(samples_m: Vec<f64>, sample_rate_hz: f64) -> Self {
        Self {
            samples_m,
            sample_rate_hz,
        }
    }

    pub fn len(&self) -> usize {
        self.samples_m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples_m.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples_m.len() as f64 / self.sample_rate_hz
    }
}

/// Remove the least-squares line a + b*i from `samples` in place.
pub fn detrend_linear(samples: &mut [f64]) {
    let n = samples.len();
    if n < 2 {
        if n == 1 {
            samples[0] = 0.0;
        }
        return;
    }
    let nf = n as f64;
    let mean_i = (nf - 1.0) / 2.0;
    let mean_y = samples.iter().sum::<f64>() / nf;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (i, y) in samples.iter().enumerate() {
        let di = i as f64 - mean_i;
        sxy += di * (y - mean_y);
        sxx += di * di;
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    for (i, y) in samples.iter_mut().enumerate() {
        *y -= mean_y + slope * (i as f64 - mean_i);
    }
}
