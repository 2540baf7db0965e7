//! Phase recentering, unwrapping, and displacement conversion.

use crate::dsp::{BinSeries, CircleFit};
use crate::error::{Error, Result};
use crate::series::DisplacementSeries;
use crate::SPEED_OF_LIGHT;
use num_complex::Complex64;

/// Recentered phase samples plus bookkeeping about rejected points.
#[derive(Debug, Clone, PartialEq)]
pub struct RecenteredPhase {
    /// Angles in (-pi, pi].
    pub phases: Vec<f64>,
    /// Indices whose sample coincided with the centre; their phase was
    /// interpolated from the nearest valid neighbours.
    pub interpolated: Vec<usize>,
}

/// Per-chirp phase sequences along frames at the selected range bin.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatrix {
    /// `phase[chirp][frame]`, radians in (-pi, pi].
    pub phase: Vec<Vec<f64>>,
    pub selected_bin: usize,
    pub antenna: usize,
}

impl PhaseMatrix {
    pub fn chirps(&self) -> usize {
        self.phase.len()
    }

    pub fn frames(&self) -> usize {
        self.phase.first().map_or(0, Vec::len)
    }
}

/// Translate the fitted centre to the origin and read off sample angles.
///
/// Samples landing on the centre itself (undefined angle) are replaced by
/// the circular interpolation of their nearest valid neighbours and
/// reported in [`RecenteredPhase::interpolated`].
pub fn recenter_phase(points: &[Complex64], fit: &CircleFit) -> Result<RecenteredPhase> {
    if points.is_empty() {
        return Err(Error::TooFew {
            what: "points to recenter",
            needed: 1,
            got: 0,
        });
    }
    let eps = 1e-12 * (fit.radius + fit.center.norm()).max(1e-300);
    let centered: Vec<Complex64> = points.iter().map(|p| p - fit.center).collect();
    let valid: Vec<bool> = centered.iter().map(|z| z.norm() > eps).collect();
    if valid.iter().all(|v| !v) {
        return Err(Error::DegenerateCircle(
            "every sample coincides with the fitted centre".into(),
        ));
    }

    let mut phases = vec![0.0; centered.len()];
    let mut interpolated = Vec::new();
    for (i, z) in centered.iter().enumerate() {
        if valid[i] {
            phases[i] = z.im.atan2(z.re);
        } else {
            // Circular mean of the nearest valid neighbours on each side.
            let prev = (0..i).rev().find(|&j| valid[j]);
            let next = (i + 1..centered.len()).find(|&j| valid[j]);
            let mean = match (prev, next) {
                (Some(a), Some(b)) => {
                    let sum = centered[a] / centered[a].norm() + centered[b] / centered[b].norm();
                    if sum.norm() > 0.0 {
                        sum.im.atan2(sum.re)
                    } else {
                        centered[a].im.atan2(centered[a].re)
                    }
                }
                (Some(a), None) => centered[a].im.atan2(centered[a].re),
                (None, Some(b)) => centered[b].im.atan2(centered[b].re),
                (None, None) => unreachable!("at least one valid sample exists"),
            };
            phases[i] = mean;
            interpolated.push(i);
        }
    }
    Ok(RecenteredPhase {
        phases,
        interpolated,
    })
}

/// Standard 1-D unwrap: fold increments larger than pi back by 2 pi.
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    let mut prev = match wrapped.first() {
        Some(&p) => {
            out.push(p);
            p
        }
        None => return out,
    };
    for &p in &wrapped[1..] {
        let mut delta = p - prev;
        while delta > std::f64::consts::PI {
            delta -= 2.0 * std::f64::consts::PI;
            offset -= 2.0 * std::f64::consts::PI;
        }
        while delta <= -std::f64::consts::PI {
            delta += 2.0 * std::f64::consts::PI;
            offset += 2.0 * std::f64::consts::PI;
        }
        out.push(p + offset);
        prev = p;
    }
    out
}

/// Unwrap a phase sequence and scale it into displacement:
/// `d_n = c / (4 pi f) * unwrap(phi_n)`.
pub fn displacement_from_phase(
    phase_rad: &[f64],
    carrier_hz: f64,
    sample_rate_hz: f64,
) -> Result<DisplacementSeries> {
    if !(carrier_hz > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "carrier must be positive, got {carrier_hz}"
        )));
    }
    let scale = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * carrier_hz);
    let samples = unwrap_phase(phase_rad)
        .into_iter()
        .map(|p| p * scale)
        .collect();
    Ok(DisplacementSeries::new(samples, sample_rate_hz))
}

/// Build the per-chirp phase matrix for one antenna of a bin series,
/// recentering every sample with the given fit.
pub fn phase_matrix(
    series: &BinSeries,
    antenna: usize,
    fit: &CircleFit,
) -> Result<PhaseMatrix> {
    let recentered = recenter_phase(&series.per_antenna[antenna], fit)?;
    let mut phase = vec![vec![0.0; series.frames]; series.chirps];
    for frame in 0..series.frames {
        for chirp in 0..series.chirps {
            phase[chirp][frame] = recentered.phases[frame * series.chirps + chirp];
        }
    }
    Ok(PhaseMatrix {
        phase,
        selected_bin: series.bin,
        antenna,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn unit_fit(center: Complex64) -> CircleFit {
        CircleFit {
            center,
            radius: 1.0,
            rms_residual: 0.0,
            iterations: 0,
            converged: true,
        }
    }

    #[test]
    fn recenter_basic_angles() {
        let fit = unit_fit(Complex64::new(0.0, 0.0));
        let out = recenter_phase(&[Complex64::new(1.0, 0.0)], &fit).unwrap();
        assert_abs_diff_eq!(out.phases[0], 0.0);

        let fit = unit_fit(Complex64::new(3.0, 3.0));
        let out = recenter_phase(&[Complex64::new(3.0, 4.5)], &fit).unwrap();
        assert_relative_eq!(out.phases[0], std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn recenter_interpolates_centre_hits() {
        let fit = unit_fit(Complex64::new(1.0, 1.0));
        let pts = vec![
            Complex64::new(2.0, 1.0),  // 0 rad
            Complex64::new(1.0, 1.0),  // exactly the centre
            Complex64::new(1.0, 2.0),  // pi/2
        ];
        let out = recenter_phase(&pts, &fit).unwrap();
        assert_eq!(out.interpolated, vec![1]);
        // Circular mean of 0 and pi/2 is pi/4.
        assert_relative_eq!(out.phases[1], std::f64::consts::FRAC_PI_4, epsilon = 1e-12);
    }

    #[test]
    fn recenter_invariant_to_positive_scaling() {
        let fit0 = unit_fit(Complex64::new(0.0, 0.0));
        let pts: Vec<Complex64> = (0..16)
            .map(|i| Complex64::from_polar(1.0, i as f64 * 0.37 - 2.0))
            .collect();
        let scaled: Vec<Complex64> = pts.iter().map(|p| p * 7.3).collect();
        let a = recenter_phase(&pts, &fit0).unwrap();
        let b = recenter_phase(&scaled, &fit0).unwrap();
        for (x, y) in a.phases.iter().zip(&b.phases) {
            assert_relative_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn unwrap_recovers_linear_ramp() {
        // Ramp 0 -> 4 pi wrapped twice.
        let n = 64;
        let truth: Vec<f64> = (0..n)
            .map(|i| 4.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64)
            .collect();
        let wrapped: Vec<f64> = truth
            .iter()
            .map(|&p| {
                let mut w = p.rem_euclid(2.0 * std::f64::consts::PI);
                if w > std::f64::consts::PI {
                    w -= 2.0 * std::f64::consts::PI;
                }
                w
            })
            .collect();
        let unwrapped = unwrap_phase(&wrapped);
        for (u, t) in unwrapped.iter().zip(&truth) {
            assert_abs_diff_eq!(u, t, epsilon = 1e-10);
        }
    }

    #[test]
    fn displacement_scaling_and_linearity() {
        let carrier = 79e9;
        let phase: Vec<f64> = (0..32).map(|i| 0.05 * i as f64).collect();
        let d1 = displacement_from_phase(&phase, carrier, 125.0).unwrap();
        let d2 = displacement_from_phase(&phase, 2.0 * carrier, 125.0).unwrap();
        for (a, b) in d1.samples_m.iter().zip(&d2.samples_m) {
            assert_relative_eq!(*a, 2.0 * b, max_relative = 1e-12);
        }
        // Phase ramp reaching 4 pi maps to one wavelength of displacement.
        let lambda = crate::SPEED_OF_LIGHT / carrier;
        let ramp: Vec<f64> = (0..=100)
            .map(|i| {
                let p = 4.0 * std::f64::consts::PI * i as f64 / 100.0;
                let mut w = p.rem_euclid(2.0 * std::f64::consts::PI);
                if w > std::f64::consts::PI {
                    w -= 2.0 * std::f64::consts::PI;
                }
                w
            })
            .collect();
        let d = displacement_from_phase(&ramp, carrier, 125.0).unwrap();
        assert_relative_eq!(
            d.samples_m.last().unwrap() - d.samples_m.first().unwrap(),
            lambda,
            max_relative = 1e-9
        );
    }

    #[test]
    fn constant_phase_is_zero_motion() {
        let d = displacement_from_phase(&[0.7; 50], 79e9, 125.0).unwrap();
        let first = d.samples_m[0];
        assert!(d.samples_m.iter().all(|&x| (x - first).abs() < 1e-15));
    }
}
