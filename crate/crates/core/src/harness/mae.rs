//! Frequency-error bookkeeping: truth/estimate matching and banded MAE.

use crate::error::{Error, Result};
use serde::Serialize;

/// Ground truth and pipeline output of one trial.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub truths_hz: Vec<f64>,
    pub estimates_hz: Vec<f64>,
}

/// Frequency band a truth falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BandLabel {
    B1to2,
    B2to3,
    B3to4,
    B4to5,
    All,
}

impl BandLabel {
    pub const BANDS: [BandLabel; 5] = [
        BandLabel::B1to2,
        BandLabel::B2to3,
        BandLabel::B3to4,
        BandLabel::B4to5,
        BandLabel::All,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BandLabel::B1to2 => "1-2 Hz",
            BandLabel::B2to3 => "2-3 Hz",
            BandLabel::B3to4 => "3-4 Hz",
            BandLabel::B4to5 => "4-5 Hz",
            BandLabel::All => "All",
        }
    }

    fn contains(&self, f: f64) -> bool {
        match self {
            BandLabel::B1to2 => (1.0..2.0).contains(&f),
            BandLabel::B2to3 => (2.0..3.0).contains(&f),
            BandLabel::B3to4 => (3.0..4.0).contains(&f),
            BandLabel::B4to5 => (4.0..5.0).contains(&f),
            BandLabel::All => true,
        }
    }
}

/// One row of the MAE report.
#[derive(Debug, Clone, Serialize)]
pub struct MaeRow {
    pub band: BandLabel,
    pub variant: String,
    pub mae_hz: f64,
    pub stderr_hz: f64,
    pub n_trials: usize,
    /// Truths that no estimate was matched to.
    pub misses: usize,
}

/// Banded mean-absolute-error report.
#[derive(Debug, Clone, Serialize)]
pub struct MaeReport {
    pub rows: Vec<MaeRow>,
}

impl MaeReport {
    pub fn band(&self, band: BandLabel) -> Option<&MaeRow> {
        self.rows.iter().find(|r| r.band == band)
    }
}

/// Greedy nearest-frequency matching: repeatedly pair the globally closest
/// (truth, estimate) among the unmatched. Returns matched (truth, error)
/// pairs and the unmatched truths.
fn match_greedy(truths: &[f64], estimates: &[f64]) -> (Vec<(f64, f64)>, Vec<f64>) {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (ti, &t) in truths.iter().enumerate() {
        for (ei, &e) in estimates.iter().enumerate() {
            pairs.push(((e - t).abs(), ti, ei));
        }
    }
    // Distance, then indices: a deterministic, label-independent order.
    pairs.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut truth_used = vec![false; truths.len()];
    let mut est_used = vec![false; estimates.len()];
    let mut matched = Vec::new();
    for (err, ti, ei) in pairs {
        if !truth_used[ti] && !est_used[ei] {
            truth_used[ti] = true;
            est_used[ei] = true;
            matched.push((truths[ti], err));
        }
    }
    let missed = truths
        .iter()
        .zip(&truth_used)
        .filter(|(_, &used)| !used)
        .map(|(&t, _)| t)
        .collect();
    (matched, missed)
}

/// Banded MAE over a set of trials.
///
/// Matched truths contribute their |estimate - truth| to the band they fall
/// into (and to "All"); unmatched truths count as misses and are reported
/// separately, not folded into the mean.
pub fn evaluate_mae(trials: &[TrialOutcome], variant: &str) -> Result<MaeReport> {
    if trials.is_empty() {
        return Err(Error::TooFew {
            what: "trials",
            needed: 1,
            got: 0,
        });
    }
    let mut rows = Vec::new();
    for band in BandLabel::BANDS {
        let mut errors = Vec::new();
        let mut misses = 0usize;
        for trial in trials {
            let (matched, missed) = match_greedy(&trial.truths_hz, &trial.estimates_hz);
            for (truth, err) in matched {
                if band.contains(truth) {
                    errors.push(err);
                }
            }
            misses += missed.iter().filter(|&&t| band.contains(t)).count();
        }
        if errors.is_empty() && misses == 0 {
            continue;
        }
        let n = errors.len();
        let mae = if n > 0 {
            errors.iter().sum::<f64>() / n as f64
        } else {
            f64::NAN
        };
        let stderr = if n > 1 {
            let var =
                errors.iter().map(|e| (e - mae) * (e - mae)).sum::<f64>() / (n as f64 - 1.0);
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        rows.push(MaeRow {
            band,
            variant: variant.to_string(),
            mae_hz: mae,
            stderr_hz: stderr,
            n_trials: n,
            misses,
        });
    }
    Ok(MaeReport { rows })
}

/// Per-truth error with misses penalized: every truth is scored against the
/// nearest available estimate (estimates may serve several truths), and a
/// trial with no estimates at all scores the full band span per truth.
/// This is the honest scalar for comparing variants that can under-report
/// sources.
pub fn mae_with_miss_penalty(trials: &[TrialOutcome], band_hz: (f64, f64)) -> f64 {
    let span = band_hz.1 - band_hz.0;
    let mut total = 0.0;
    let mut count = 0usize;
    for trial in trials {
        for &truth in &trial.truths_hz {
            let err = trial
                .estimates_hz
                .iter()
                .map(|e| (e - truth).abs())
                .fold(f64::INFINITY, f64::min);
            total += if err.is_finite() { err } else { span };
            count += 1;
        }
    }
    if count == 0 {
        return 0.0;
    }
    total / count as f64
}
