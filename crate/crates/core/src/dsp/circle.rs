//! Least-squares circle fitting of I/Q constellations.
//!
//! The static clutter vector shifts the vibration circle away from the
//! origin. An algebraic (Kasa) fit seeds a Levenberg-Marquardt refinement
//! of the geometric cost `sum (|p_i - c| - r)^2`, whose minimizer is the
//! clutter estimate.

use crate::error::{Error, Result};
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

/// Result of a circle fit over complex samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFit {
    /// Estimated centre (the static component).
    pub center: Complex64,
    /// Estimated radius (the dynamic component magnitude).
    pub radius: f64,
    /// RMS of the geometric residuals `|p_i - c| - r`.
    pub rms_residual: f64,
    /// Levenberg-Marquardt iterations taken.
    pub iterations: usize,
    /// False when the iteration cap was hit before the cost settled; the
    /// best iterate is still returned.
    pub converged: bool,
}

impl CircleFit {
    /// True when the fitted circle stands out from the point scatter.
    /// A near-static constellation collapses to a blob whose fitted radius
    /// is comparable to its residual spread; such fits carry no motion
    /// information.
    pub fn indicates_motion(&self) -> bool {
        self.radius >= 3.0 * self.rms_residual
    }
}

const MAX_ITERATIONS: usize = 100;
const RELATIVE_COST_TOL: f64 = 1e-10;
/// Fitted radii beyond this multiple of the point-cloud extent mean the
/// points are (numerically) collinear: the least-squares circle runs off
/// to infinity.
const RADIUS_SPREAD_LIMIT: f64 = 1e7;

fn cloud_extent(points: &[Complex64]) -> f64 {
    let n = points.len() as f64;
    let centroid = points.iter().sum::<Complex64>() / n;
    (points.iter().map(|p| (p - centroid).norm_sqr()).sum::<f64>() / n).sqrt()
}

/// Relative-determinant floor below which the algebraic normal matrix is
/// treated as singular. Exactly collinear points land around 1e-19 while
/// even a noiseless 0.05 rad arc stays above 1e-15.
const KASA_SINGULARITY: f64 = 1e-16;

/// Algebraic seed: minimize `sum (x^2 + y^2 + D x + E y + F)^2` over
/// centroid-shifted points (shifting keeps the conditioning independent of
/// the static offset).
fn kasa_fit(points: &[Complex64]) -> Result<(Complex64, f64)> {
    let centroid = points.iter().sum::<Complex64>() / points.len() as f64;
    let mut m = Matrix3::<f64>::zeros();
    let mut b = Vector3::<f64>::zeros();
    for p in points {
        let (x, y) = (p.re - centroid.re, p.im - centroid.im);
        let z = x * x + y * y;
        m[(0, 0)] += x * x;
        m[(0, 1)] += x * y;
        m[(0, 2)] += x;
        m[(1, 1)] += y * y;
        m[(1, 2)] += y;
        m[(2, 2)] += 1.0;
        b[0] -= z * x;
        b[1] -= z * y;
        b[2] -= z;
    }
    m[(1, 0)] = m[(0, 1)];
    m[(2, 0)] = m[(0, 2)];
    m[(2, 1)] = m[(1, 2)];

    let hadamard = (0..3)
        .map(|i| m.row(i).norm())
        .product::<f64>()
        .max(1e-300);
    if m.determinant().abs() < KASA_SINGULARITY * hadamard {
        return Err(Error::DegenerateCircle(
            "collinear or coincident points".into(),
        ));
    }

    let solution = m
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::DegenerateCircle("collinear or coincident points".into()))?;
    let (d, e, f) = (solution[0], solution[1], solution[2]);
    let center = Complex64::new(-d / 2.0, -e / 2.0);
    let r_sq = center.norm_sqr() - f;
    if !r_sq.is_finite() || r_sq <= 0.0 {
        return Err(Error::DegenerateCircle(format!(
            "algebraic fit produced non-positive radius^2 = {r_sq:.3e}"
        )));
    }
    Ok((center + centroid, r_sq.sqrt()))
}

fn cost_and_residuals(points: &[Complex64], center: Complex64, radius: f64) -> (f64, Vec<f64>) {
    let residuals: Vec<f64> = points.iter().map(|p| (p - center).norm() - radius).collect();
    let cost = residuals.iter().map(|r| r * r).sum();
    (cost, residuals)
}

/// Fit a circle to at least three non-collinear complex samples.
pub fn fit_circle(points: &[Complex64]) -> Result<CircleFit> {
    if points.len() < 3 {
        return Err(Error::TooFew {
            what: "points for a circle fit",
            needed: 3,
            got: points.len(),
        });
    }
    if points.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
        return Err(Error::NonFinite("circle fit input"));
    }

    let extent = cloud_extent(points);
    if extent <= 0.0 {
        return Err(Error::DegenerateCircle("all points coincide".into()));
    }
    let (mut center, mut radius) = kasa_fit(points)?;
    if !center.re.is_finite() || !center.im.is_finite() || radius > RADIUS_SPREAD_LIMIT * extent {
        return Err(Error::DegenerateCircle(format!(
            "collinear points: algebraic radius {radius:.3e} vs spread {extent:.3e}"
        )));
    }
    let (mut cost, _) = cost_and_residuals(points, center, radius);

    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < MAX_ITERATIONS {
        iterations += 1;

        // Normal equations of the geometric least-squares problem.
        let mut jtj = Matrix3::<f64>::zeros();
        let mut jtf = Vector3::<f64>::zeros();
        for p in points {
            let dx = p.re - center.re;
            let dy = p.im - center.im;
            let dist = (dx * dx + dy * dy).sqrt().max(1e-300);
            let f = dist - radius;
            let j = Vector3::new(-dx / dist, -dy / dist, -1.0);
            jtj += j * j.transpose();
            jtf += j * f;
        }

        let mut damped = jtj;
        for k in 0..3 {
            damped[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
        }
        let Some(delta) = damped.lu().solve(&(-jtf)) else {
            break;
        };

        let cand_center = Complex64::new(center.re + delta[0], center.im + delta[1]);
        let cand_radius = (radius + delta[2]).abs();
        let (cand_cost, _) = cost_and_residuals(points, cand_center, cand_radius);

        if cand_cost <= cost {
            let rel_drop = (cost - cand_cost) / cost.max(1e-300);
            center = cand_center;
            radius = cand_radius;
            cost = cand_cost;
            lambda = (lambda / 10.0).max(1e-12);
            if rel_drop < RELATIVE_COST_TOL {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                // Cost surface is flat at this scale; treat as settled.
                converged = true;
                break;
            }
        }
    }

    if radius <= 0.0 || !radius.is_finite() || radius > RADIUS_SPREAD_LIMIT * extent {
        return Err(Error::DegenerateCircle(format!(
            "refinement left radius {radius:.3e} against spread {extent:.3e}"
        )));
    }

    let (final_cost, _) = cost_and_residuals(points, center, radius);
    Ok(CircleFit {
        center,
        radius,
        rms_residual: (final_cost / points.len() as f64).sqrt(),
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn circle_points(
        center: Complex64,
        radius: f64,
        n: usize,
        arc_rad: f64,
        radial_sigma: f64,
        rng: &mut ChaCha8Rng,
    ) -> Vec<Complex64> {
        let noise = Normal::new(0.0, radial_sigma).unwrap();
        (0..n)
            .map(|i| {
                let theta = arc_rad * i as f64 / n as f64;
                let r = radius + if radial_sigma > 0.0 { noise.sample(rng) } else { 0.0 };
                center + Complex64::from_polar(r, theta)
            })
            .collect()
    }

    #[test]
    fn exact_recovery_on_noiseless_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let truth = Complex64::new(3.0, 3.0);
        let pts = circle_points(truth, 1.5, 12, 2.0 * std::f64::consts::PI, 0.0, &mut rng);
        let fit = fit_circle(&pts).unwrap();
        assert!(
            (fit.center - truth).norm() < 1e-9,
            "center error {:.2e}",
            (fit.center - truth).norm()
        );
        assert!((fit.radius - 1.5).abs() < 1e-9);
        assert!(fit.rms_residual < 1e-9);
        assert!(fit.indicates_motion());
    }

    #[test]
    fn noisy_full_circle_monte_carlo() {
        // 500 points, radial noise sigma = 2% of radius: the centre lands
        // within 0.5% of the radius in at least 95 of 100 seeded trials.
        let truth = Complex64::new(-2.0, 5.0);
        let radius = 2.0;
        let mut errors: Vec<f64> = (0..100)
            .map(|seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pts = circle_points(
                    truth,
                    radius,
                    500,
                    2.0 * std::f64::consts::PI,
                    0.02 * radius,
                    &mut rng,
                );
                (fit_circle(&pts).unwrap().center - truth).norm()
            })
            .collect();
        errors.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let p95 = errors[94];
        assert!(
            p95 < 0.005 * radius,
            "95th percentile center error {:.2e} too large",
            p95
        );
    }

    #[test]
    fn partial_arc_monte_carlo() {
        // A 120-degree arc with 1% radial noise still recovers the centre
        // to within 2% of the radius.
        let truth = Complex64::new(1.0, -4.0);
        let radius = 3.0;
        let mut errors: Vec<f64> = (0..100)
            .map(|seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
                let pts = circle_points(
                    truth,
                    radius,
                    500,
                    2.0 * std::f64::consts::PI / 3.0,
                    0.01 * radius,
                    &mut rng,
                );
                (fit_circle(&pts).unwrap().center - truth).norm()
            })
            .collect();
        errors.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(
            errors[94] < 0.02 * radius,
            "95th percentile arc center error {:.2e}",
            errors[94]
        );
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let pts: Vec<Complex64> = (0..10)
            .map(|i| Complex64::new(i as f64, 2.0 * i as f64 + 1.0))
            .collect();
        assert!(matches!(
            fit_circle(&pts),
            Err(Error::DegenerateCircle(_))
        ));
        assert!(matches!(
            fit_circle(&pts[..2]),
            Err(Error::TooFew { .. })
        ));
    }

    #[test]
    fn static_blob_flags_no_motion() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let noise = Normal::new(0.0, 0.05).unwrap();
        let pts: Vec<Complex64> = (0..400)
            .map(|_| {
                Complex64::new(4.0 + noise.sample(&mut rng), -1.0 + noise.sample(&mut rng))
            })
            .collect();
        let fit = fit_circle(&pts).unwrap();
        assert!(
            !fit.indicates_motion(),
            "blob fit should not indicate motion: r={} rms={}",
            fit.radius,
            fit.rms_residual
        );
    }

    #[test]
    fn translation_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let pts = circle_points(
            Complex64::new(0.5, 0.5),
            1.0,
            60,
            2.0 * std::f64::consts::PI,
            0.01,
            &mut rng,
        );
        let shift = Complex64::new(-7.25, 3.5);
        let shifted: Vec<Complex64> = pts.iter().map(|p| p + shift).collect();
        let base = fit_circle(&pts).unwrap();
        let moved = fit_circle(&shifted).unwrap();
        assert!((moved.center - base.center - shift).norm() < 1e-7);
        assert!((moved.radius - base.radius).abs() < 1e-7);
    }
}
