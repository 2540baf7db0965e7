//! Blind source separation across virtual-antenna displacement series.
//!
//! Each virtual antenna observes a different linear mix of the scene's
//! vibration sources. FastICA with a kurtosis contrast unmixes them:
//! whitening by eigen-decomposition of the channel covariance, then
//! deflation-mode fixed-point iteration, each new direction decorrelated
//! from the previous ones. The number of sources is chosen by scanning
//! models over every candidate component count and locating the largest
//! change in mean absolute kurtosis.

use crate::error::{Error, Result};
use crate::series::{detrend_linear, DisplacementSeries};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Per-antenna observation matrix, channels x frames, rows detrended and
/// zero-mean.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedObservations {
    pub data: DMatrix<f64>,
    pub sample_rate_hz: f64,
}

impl MixedObservations {
    /// Assemble from per-channel displacement series; applies a linear
    /// detrend and centering per channel.
    pub fn from_series(channels: &[DisplacementSeries]) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::TooFew {
                what: "channels",
                needed: 1,
                got: 0,
            });
        }
        let frames = channels[0].len();
        if channels.iter().any(|c| c.len() != frames) {
            return Err(Error::InvalidParameter(
                "channel series lengths differ".into(),
            ));
        }
        let rate = channels[0].sample_rate_hz;
        let mut data = DMatrix::zeros(channels.len(), frames);
        for (i, ch) in channels.iter().enumerate() {
            let mut row = ch.samples_m.clone();
            detrend_linear(&mut row);
            for (j, v) in row.into_iter().enumerate() {
                data[(i, j)] = v;
            }
        }
        Ok(Self {
            data,
            sample_rate_hz: rate,
        })
    }

    /// Raw matrix constructor for already-centered data (tests, synthetic
    /// mixtures).
    pub fn from_matrix(data: DMatrix<f64>, sample_rate_hz: f64) -> Self {
        Self {
            data,
            sample_rate_hz,
        }
    }

    pub fn channels(&self) -> usize {
        self.data.nrows()
    }

    pub fn frames(&self) -> usize {
        self.data.ncols()
    }
}

/// Output of a FastICA fit.
#[derive(Debug, Clone)]
pub struct SeparationResult {
    /// Unmixing matrix in channel space, components x channels.
    pub unmixing_w: DMatrix<f64>,
    /// Recovered sources, components x frames, unit variance rows.
    pub sources: DMatrix<f64>,
    /// Excess (Fisher) kurtosis of each source row.
    pub kurtosis_per_component: Vec<f64>,
    pub n_components: usize,
    /// False when any deflation sweep hit its iteration cap.
    pub converged: bool,
    /// Estimated mixing matrix (pseudo-inverse of the unmixing map),
    /// channels x components. Column norms carry the source amplitudes in
    /// channel units.
    pub mixing_estimate: DMatrix<f64>,
    pub sample_rate_hz: f64,
}

/// One reconstructed source with its ranking metadata.
#[derive(Debug, Clone)]
pub struct SourceSeries {
    pub series: DisplacementSeries,
    /// RMS amplitude in channel (displacement) units via back-projection.
    pub amplitude_m: f64,
    pub kurtosis: f64,
    /// Index of the component inside the separation result.
    pub component: usize,
}

const MAX_ICA_ITERATIONS: usize = 200;
const CONVERGENCE_DOT: f64 = 1.0 - 1e-6;
const RANK_EPS: f64 = 1e-12;

/// Bias-uncorrected excess kurtosis: m4 / m2^2 - 3.
pub fn excess_kurtosis(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = samples.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    if m2 <= 0.0 {
        return 0.0;
    }
    m4 / (m2 * m2) - 3.0
}

struct Whitened {
    /// Whitening map, rank x channels.
    k: DMatrix<f64>,
    /// Its right inverse (de-whitening), channels x rank.
    k_inv: DMatrix<f64>,
    /// Whitened data, rank x frames, identity covariance.
    z: DMatrix<f64>,
}

/// Whiten onto every significant covariance direction (the full rank, not
/// just the top `n_components`): the deflation then searches the whole
/// whitened space, which keeps component extraction and the kurtosis scan
/// invariant to per-channel rescaling.
fn whiten(x: &MixedObservations, n_components: usize) -> Result<Whitened> {
    let channels = x.channels();
    let frames = x.frames() as f64;

    // Center rows defensively; `from_series` already does this.
    let mut data = x.data.clone();
    for mut row in data.row_iter_mut() {
        let mean = row.iter().sum::<f64>() / frames;
        row.iter_mut().for_each(|v| *v -= mean);
    }

    let cov = &data * data.transpose() / frames;
    let eig = cov.symmetric_eigen();
    let mut order: Vec<usize> = (0..channels).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());

    let lambda_max = eig.eigenvalues[order[0]].max(0.0);
    let rank = order
        .iter()
        .filter(|&&i| eig.eigenvalues[i] > RANK_EPS * lambda_max.max(1e-300))
        .count();
    if rank < n_components {
        return Err(Error::RankDeficient {
            rank,
            requested: n_components,
        });
    }

    let mut k = DMatrix::zeros(rank, channels);
    let mut k_inv = DMatrix::zeros(channels, rank);
    for (row, &idx) in order.iter().take(rank).enumerate() {
        let scale = eig.eigenvalues[idx].sqrt();
        let u = eig.eigenvectors.column(idx);
        for ch in 0..channels {
            k[(row, ch)] = u[ch] / scale;
            k_inv[(ch, row)] = u[ch] * scale;
        }
    }
    let z = &k * &data;
    Ok(Whitened { k, k_inv, z })
}

/// Deflation-mode FastICA with the kurtosis contrast `g(u) = u^3`.
pub fn fast_ica(x: &MixedObservations, n_components: usize, seed: u64) -> Result<SeparationResult> {
    let channels = x.channels();
    if n_components == 0 || n_components > channels {
        return Err(Error::InvalidParameter(format!(
            "component count {n_components} outside 1..={channels}"
        )));
    }
    if x.frames() <= 10 * channels {
        return Err(Error::TooFew {
            what: "frames for ICA (need > 10x channels)",
            needed: 10 * channels + 1,
            got: x.frames(),
        });
    }

    let wh = whiten(x, n_components)?;
    let rank = wh.z.nrows();
    let n_frames = x.frames() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut w_rot = DMatrix::<f64>::zeros(n_components, rank);
    let mut converged = true;

    for comp in 0..n_components {
        let mut w = random_unit_vector(rank, &mut rng);
        orthogonalize(&mut w, &w_rot, comp);
        normalize_or_redraw(&mut w, rank, &mut rng, &w_rot, comp);

        let mut comp_converged = false;
        for _ in 0..MAX_ICA_ITERATIONS {
            // Fixed point for kurtosis on whitened data:
            // w+ = E[z (w.z)^3] - 3 w.
            let y = wh.z.transpose() * &w;
            let y3 = y.map(|v| v * v * v);
            let mut w_new = (&wh.z * y3) / n_frames - 3.0 * &w;

            orthogonalize(&mut w_new, &w_rot, comp);
            let norm = w_new.norm();
            if norm < 1e-12 {
                w_new = random_unit_vector(rank, &mut rng);
                orthogonalize(&mut w_new, &w_rot, comp);
            }
            w_new /= w_new.norm();

            let agreement = w_new.dot(&w).abs();
            w = w_new;
            if agreement > CONVERGENCE_DOT {
                comp_converged = true;
                break;
            }
        }
        converged &= comp_converged;
        w_rot.row_mut(comp).copy_from(&w.transpose());
    }

    let sources = &w_rot * &wh.z;
    let kurtosis: Vec<f64> = (0..n_components)
        .map(|i| {
            let row: Vec<f64> = sources.row(i).iter().copied().collect();
            excess_kurtosis(&row)
        })
        .collect();

    Ok(SeparationResult {
        unmixing_w: &w_rot * &wh.k,
        sources,
        kurtosis_per_component: kurtosis,
        n_components,
        converged,
        mixing_estimate: &wh.k_inv * w_rot.transpose(),
        sample_rate_hz: x.sample_rate_hz,
    })
}

fn random_unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

fn orthogonalize(w: &mut DVector<f64>, basis: &DMatrix<f64>, rows: usize) {
    for j in 0..rows {
        let b = basis.row(j).transpose();
        let proj = w.dot(&b);
        *w -= proj * b;
    }
}

fn normalize_or_redraw(
    w: &mut DVector<f64>,
    dim: usize,
    rng: &mut ChaCha8Rng,
    basis: &DMatrix<f64>,
    rows: usize,
) {
    let mut guard = 0;
    while w.norm() < 1e-12 && guard < 16 {
        *w = random_unit_vector(dim, rng);
        orthogonalize(w, basis, rows);
        guard += 1;
    }
    *w /= w.norm();
}

/// Outcome of the component-count scan.
#[derive(Debug, Clone)]
pub struct ComponentSelection {
    pub count: usize,
    /// (model size, mean |kurtosis|) for every model that fitted.
    pub kurtosis_means: Vec<(usize, f64)>,
    /// Set when the kurtosis profile was flat (no non-Gaussian structure):
    /// the count defaults to 1.
    pub no_structure: bool,
}

/// Scan FastICA models over `n = 1..=channels` and pick the component count
/// at the largest change in mean absolute kurtosis between consecutive
/// models.
///
/// Models that fail to fit (e.g. rank-deficient covariance at zero noise)
/// are dropped from the scan; the change is then evaluated between the
/// surviving neighbours. A flat profile (no change above the kurtosis
/// sampling floor, 3 sqrt(24/N)) means the channels carry no non-Gaussian
/// structure: the count defaults to 1 with
/// [`ComponentSelection::no_structure`] set.
pub fn select_component_count(x: &MixedObservations, seed: u64) -> Result<ComponentSelection> {
    let channels = x.channels();
    if channels < 2 {
        return Err(Error::TooFew {
            what: "channels for component selection",
            needed: 2,
            got: channels,
        });
    }

    let mut means: Vec<(usize, f64)> = Vec::new();
    for n in 1..=channels {
        // Per-model seed keeps each fit deterministic regardless of which
        // models fail.
        match fast_ica(x, n, seed.wrapping_add(n as u64)) {
            Ok(result) => {
                let mean_abs = result
                    .kurtosis_per_component
                    .iter()
                    .map(|k| k.abs())
                    .sum::<f64>()
                    / n as f64;
                means.push((n, mean_abs));
            }
            Err(Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        }
    }

    if means.is_empty() {
        return Err(Error::AllModelsFailed);
    }
    if means.len() == 1 {
        return Ok(ComponentSelection {
            count: 1,
            kurtosis_means: means,
            no_structure: true,
        });
    }

    let mut best: Option<(usize, f64)> = None;
    for pair in means.windows(2) {
        let change = (pair[1].1 - pair[0].1).abs();
        match best {
            Some((_, c)) if change <= c => {}
            _ => best = Some((pair[0].0, change)),
        }
    }
    let (left_n, max_change) = best.unwrap();
    // Sampling noise floor of an N-sample excess-kurtosis estimate; a
    // profile whose changes never clear it carries no usable structure.
    let floor = 3.0 * (24.0 / x.frames() as f64).sqrt();
    if max_change <= floor.max(1e-6) {
        return Ok(ComponentSelection {
            count: 1,
            kurtosis_means: means,
            no_structure: true,
        });
    }
    Ok(ComponentSelection {
        count: left_n,
        kurtosis_means: means,
        no_structure: false,
    })
}

/// Back-project sources into channel units and rank by amplitude.
///
/// The strongest component corresponds to the reflector moving most
/// directly along the radar line of sight, so callers treat index 0 as the
/// primary source.
pub fn reconstruct_sources(result: &SeparationResult) -> Vec<SourceSeries> {
    let channels = result.mixing_estimate.nrows() as f64;
    let mut out: Vec<SourceSeries> = (0..result.n_components)
        .map(|i| {
            // RMS of the mixing column: average channel amplitude of a
            // unit-variance source.
            let col = result.mixing_estimate.column(i);
            let scale = (col.norm_squared() / channels).sqrt();
            let samples: Vec<f64> = result.sources.row(i).iter().map(|v| v * scale).collect();
            let amplitude = (samples.iter().map(|v| v * v).sum::<f64>()
                / samples.len() as f64)
                .sqrt();
            SourceSeries {
                series: DisplacementSeries::new(samples, result.sample_rate_hz),
                amplitude_m: amplitude,
                kurtosis: result.kurtosis_per_component[i],
                component: i,
            }
        })
        .collect();
    out.sort_by(|a, b| b.amplitude_m.partial_cmp(&a.amplitude_m).unwrap());
    out
}

/// Amari performance index of a combined matrix `P = W A`: zero iff `P` is
/// a scaled permutation, i.e. the unmixing perfectly inverts the mixing up
/// to the inherent order/sign ambiguity.
pub fn amari_index(p: &DMatrix<f64>) -> f64 {
    let n = p.nrows();
    assert_eq!(n, p.ncols(), "Amari index needs a square matrix");
    if n < 2 {
        return 0.0;
    }
    let abs = p.map(f64::abs);
    let mut total = 0.0;
    for i in 0..n {
        let row_max = abs.row(i).max();
        total += abs.row(i).iter().map(|v| v / row_max).sum::<f64>() - 1.0;
    }
    for j in 0..n {
        let col_max = abs.column(j).max();
        total += abs.column(j).iter().map(|v| v / col_max).sum::<f64>() - 1.0;
    }
    total / (2.0 * n as f64 * (n as f64 - 1.0))
}
