//! Gaussian kernel density estimation.

use crate::error::{Error, Result};

/// Floor applied to the bandwidth so degenerate all-equal samples still
/// yield a proper density.
pub const BANDWIDTH_FLOOR: f64 = 1e-6;

/// Gaussian-kernel density estimate over a fixed sample set.
#[derive(Debug, Clone)]
pub struct Kde {
    samples: Vec<f64>,
    bandwidth: f64,
}

impl Kde {
    /// Fit a KDE. Without an explicit bandwidth, Scott's rule
    /// `std * n^(-1/5)` is used, floored at [`BANDWIDTH_FLOOR`].
    pub fn fit(samples: &[f64], bandwidth: Option<f64>) -> Result<Kde> {
        if samples.is_empty() {
            return Err(Error::Config("KDE needs at least one sample".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericDegeneracy("non-finite KDE sample".into()));
        }
        let bandwidth = match bandwidth {
            Some(h) if h > 0.0 => h,
            Some(h) => {
                return Err(Error::Config(format!("bandwidth must be positive, got {h}")));
            }
            None => scott_bandwidth(samples),
        }
        .max(BANDWIDTH_FLOOR);
        Ok(Kde {
            samples: samples.to_vec(),
            bandwidth,
        })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Density at `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let norm = 1.0 / (self.samples.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
        let sum: f64 = self
            .samples
            .iter()
            .map(|&xi| {
                let z = (x - xi) / h;
                (-0.5 * z * z).exp()
            })
            .sum();
        norm * sum
    }

    /// Evaluate on an even grid of `points` values over `[lo, hi]`.
    pub fn grid(&self, lo: f64, hi: f64, points: usize) -> Vec<(f64, f64)> {
        assert!(points >= 2, "grid needs at least two points");
        let step = (hi - lo) / (points - 1) as f64;
        (0..points)
            .map(|i| {
                let x = lo + step * i as f64;
                (x, self.evaluate(x))
            })
            .collect()
    }

    /// Grid argmax: the "highest frequency" value of the density.
    pub fn mode_on_grid(&self, lo: f64, hi: f64, points: usize) -> f64 {
        self.grid(lo, hi, points)
            .into_iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(x, _)| x)
            .unwrap()
    }
}

fn scott_bandwidth(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    if samples.len() < 2 {
        return BANDWIDTH_FLOOR;
    }
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    var.sqrt() * n.powf(-0.2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trapezoid(points: &[(f64, f64)]) -> f64 {
        points
            .windows(2)
            .map(|w| 0.5 * (w[1].1 + w[0].1) * (w[1].0 - w[0].0))
            .sum()
    }

    #[test]
    fn single_sample_is_a_bump_at_the_sample() {
        let kde = Kde::fit(&[5.0], None).unwrap();
        let h = kde.bandwidth();
        let mode = kde.mode_on_grid(5.0 - 3.0 * h, 5.0 + 3.0 * h, 513);
        let grid_step = 6.0 * h / 512.0;
        assert!((mode - 5.0).abs() <= grid_step);
    }

    #[test]
    fn density_integrates_to_one() {
        let samples: Vec<f64> = (0..40).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let kde = Kde::fit(&samples, None).unwrap();
        let h = kde.bandwidth();
        let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min) - 5.0 * h;
        let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 5.0 * h;
        let integral = trapezoid(&kde.grid(lo, hi, 4096));
        assert!((integral - 1.0).abs() < 1e-3, "integral {integral}");
    }

    #[test]
    fn two_separated_samples_are_bimodal() {
        let kde = Kde::fit(&[0.0, 10.0], Some(1.0)).unwrap();
        let d0 = kde.evaluate(0.0);
        let d5 = kde.evaluate(5.0);
        let d10 = kde.evaluate(10.0);
        assert!((d0 - d10).abs() < 1e-12);
        assert!(d0 > d5);
    }

    #[test]
    fn density_is_non_negative() {
        let kde = Kde::fit(&[1.0, 2.0, 2.5], None).unwrap();
        for (_, d) in kde.grid(-10.0, 10.0, 200) {
            assert!(d >= 0.0);
        }
    }

    #[test]
    fn degenerate_samples_get_floored_bandwidth() {
        let kde = Kde::fit(&[3.0, 3.0, 3.0], None).unwrap();
        assert_eq!(kde.bandwidth(), BANDWIDTH_FLOOR);
        assert!(kde.evaluate(3.0).is_finite());
    }
}
