//! Sample moments and fixed-range histograms.

use alloc::vec::Vec;

use crate::error::{bail, Result};

/// Pearson kurtosis `m4 / m2²` (3 for a Gaussian). Zero-variance samples give NaN.
pub fn kurtosis(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for x in samples {
        let d = (x - mean) * (x - mean);
        m2 += d;
        m4 += d * d;
    }
    (m4 / n) / ((m2 / n) * (m2 / n))
}

/// `(bin_center, fraction)` over `bins` equal bins spanning `[lo, hi]`.
///
/// Samples outside the range are counted in the nearest end bin, so the
/// fractions always sum to one.
pub fn histogram(samples: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Vec<(f64, f64)>> {
    if bins == 0 {
        bail!(Domain, "histogram needs at least one bin");
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        bail!(Domain, "histogram range must satisfy lo < hi, got [{lo}, {hi}]");
    }
    if samples.is_empty() {
        bail!(Dimension, "histogram of an empty sample");
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = alloc::vec![0usize; bins];
    for &x in samples {
        let idx = libm::floor((x - lo) / width);
        let idx = if idx < 0.0 { 0 } else { (idx as usize).min(bins - 1) };
        counts[idx] += 1;
    }
    let n = samples.len() as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (lo + (i as f64 + 0.5) * width, c as f64 / n))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kurtosis_of_two_point_distribution() {
        assert!((kurtosis(&[1.0, -1.0, 1.0, -1.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn histogram_mass_and_centering() {
        let h = histogram(&[0.0; 10], 101, -3.0, 3.0).unwrap();
        assert_eq!(h.len(), 101);
        assert_eq!(h[50].1, 1.0);
        assert!(h[50].0.abs() < 1e-12);
        let h = histogram(&[-10.0, 10.0, 0.2], 4, -1.0, 1.0).unwrap();
        assert_eq!(h[0].1 + h[3].1 + h[2].1, 1.0);
        assert!(histogram(&[1.0], 0, 0.0, 1.0).is_err());
        assert!(histogram(&[1.0], 3, 1.0, 1.0).is_err());
    }
}
