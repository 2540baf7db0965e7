//! Day/night frequency deltas over multi-day measurement series.

use crate::error::{Error, Result};

/// One timestamped frequency measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiurnalSample {
    /// Hours since the start of day 0.
    pub hours: f64,
    pub frequency_hz: f64,
}

/// A multi-day measurement series with a configurable daylight window.
#[derive(Debug, Clone, PartialEq)]
pub struct DiurnalSeries {
    pub samples: Vec<DiurnalSample>,
    /// Local hours treated as daytime, `[start, end)`. Default 06:00-18:00.
    pub day_window: (f64, f64),
}

impl DiurnalSeries {
    pub fn new(samples: Vec<DiurnalSample>) -> Self {
        Self {
            samples,
            day_window: (6.0, 18.0),
        }
    }

    pub fn with_day_window(mut self, start: f64, end: f64) -> Self {
        self.day_window = (start, end);
        self
    }
}

/// Per-day day/night medians and their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayDelta {
    pub day: usize,
    pub day_median_hz: f64,
    pub night_median_hz: f64,
    /// day median - night median.
    pub delta_hz: f64,
    pub n_day: usize,
    pub n_night: usize,
}

fn median(values: &mut Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 0 {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    } else {
        values[n / 2]
    }
}

/// Compute per-day deltas: median daytime frequency minus median nighttime
/// frequency. Days missing either a daytime or a nighttime sample are
/// excluded and reported in the second return value.
pub fn diurnal_delta(series: &DiurnalSeries) -> Result<(Vec<DayDelta>, Vec<usize>)> {
    if series.samples.is_empty() {
        return Err(Error::TooFew {
            what: "diurnal samples",
            needed: 1,
            got: 0,
        });
    }
    let (day_start, day_end) = series.day_window;
    if !(day_start < day_end) || day_start < 0.0 || day_end > 24.0 {
        return Err(Error::InvalidParameter(format!(
            "day window must satisfy 0 <= start < end <= 24, got [{day_start}, {day_end})"
        )));
    }

    let max_day = series
        .samples
        .iter()
        .map(|s| (s.hours / 24.0).floor() as usize)
        .max()
        .unwrap();

    let mut deltas = Vec::new();
    let mut skipped = Vec::new();
    for day in 0..=max_day {
        let mut day_vals = Vec::new();
        let mut night_vals = Vec::new();
        for s in &series.samples {
            if (s.hours / 24.0).floor() as usize != day {
                continue;
            }
            let hour_of_day = s.hours.rem_euclid(24.0);
            if hour_of_day >= day_start && hour_of_day < day_end {
                day_vals.push(s.frequency_hz);
            } else {
                night_vals.push(s.frequency_hz);
            }
        }
        if day_vals.is_empty() || night_vals.is_empty() {
            skipped.push(day);
            continue;
        }
        let n_day = day_vals.len();
        let n_night = night_vals.len();
        let dm = median(&mut day_vals);
        let nm = median(&mut night_vals);
        deltas.push(DayDelta {
            day,
            day_median_hz: dm,
            night_median_hz: nm,
            delta_hz: dm - nm,
            n_day,
            n_night,
        });
    }
    Ok((deltas, skipped))
}
