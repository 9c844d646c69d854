//! Moment-matching fits of generalized Gaussian (GGD) and asymmetric GGD
//! (AGGD) distributions.
//!
//! Both fits invert the ratio
//!
//! ```text
//! rho(alpha) = Γ(2/α)² / (Γ(1/α) Γ(3/α))
//! ```
//!
//! which equals `(E|x|)² / E[x²]` for a zero-mean GGD of shape `alpha`. The
//! function is tabulated on `alpha ∈ [0.2, 10]` with step 0.001 and inverted
//! by nearest match.

use alloc::vec::Vec;

use crate::error::{bail, Result};

pub const ALPHA_MIN: f64 = 0.2;
pub const ALPHA_MAX: f64 = 10.0;
pub const ALPHA_STEP: f64 = 0.001;

/// Minimum number of samples accepted by either fit.
pub const MIN_SAMPLES: usize = 100;

/// `Γ(2/α)² / (Γ(1/α) Γ(3/α))`, evaluated in log space.
pub fn ggd_ratio(alpha: f64) -> f64 {
    let lg = |x: f64| libm::lgamma(x);
    libm::exp(2.0 * lg(2.0 / alpha) - lg(1.0 / alpha) - lg(3.0 / alpha))
}

/// Tabulated `rho(alpha)` used to invert the moment ratio.
#[derive(Debug, Clone)]
pub struct ShapeGrid {
    alphas: Vec<f64>,
    ratios: Vec<f64>,
}

impl Default for ShapeGrid {
    fn default() -> Self {
        Self::new()
    }
}

impl ShapeGrid {
    pub fn new() -> Self {
        let steps = libm::round((ALPHA_MAX - ALPHA_MIN) / ALPHA_STEP) as usize;
        let alphas: Vec<f64> = (0..=steps).map(|i| ALPHA_MIN + i as f64 * ALPHA_STEP).collect();
        let ratios: Vec<f64> = alphas.iter().map(|&a| ggd_ratio(a)).collect();
        assert!(
            ratios.windows(2).all(|w| w[0] < w[1]),
            "GGD ratio must be strictly increasing on the shape grid"
        );
        Self { alphas, ratios }
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Grid shape whose ratio is closest to `target`.
    pub fn invert(&self, target: f64) -> f64 {
        let idx = self.ratios.partition_point(|&r| r < target);
        let best = if idx == 0 {
            0
        } else if idx == self.ratios.len() || target - self.ratios[idx - 1] <= self.ratios[idx] - target {
            idx - 1
        } else {
            idx
        };
        self.alphas[best]
    }

    pub fn fit_ggd(&self, samples: &[f64]) -> Result<GgdParams> {
        check_count(samples)?;
        let n = samples.len() as f64;
        let abs_mean = samples.iter().map(|x| libm::fabs(*x)).sum::<f64>() / n;
        let second = samples.iter().map(|x| x * x).sum::<f64>() / n;
        if !(second > 0.0) {
            bail!(DegenerateInput, "samples have zero variance");
        }
        let rho = abs_mean * abs_mean / second;
        Ok(GgdParams {
            alpha: self.invert(rho),
            sigma: libm::sqrt(second),
        })
    }

    pub fn fit_aggd(&self, samples: &[f64]) -> Result<AggdParams> {
        check_count(samples)?;
        let (mut left_sq, mut left_n, mut right_sq, mut right_n) = (0.0, 0usize, 0.0, 0usize);
        let (mut abs_sum, mut sq_sum) = (0.0, 0.0);
        for &x in samples {
            if x < 0.0 {
                left_sq += x * x;
                left_n += 1;
            } else if x > 0.0 {
                right_sq += x * x;
                right_n += 1;
            }
            abs_sum += libm::fabs(x);
            sq_sum += x * x;
        }
        if left_n == 0 || right_n == 0 {
            bail!(
                DegenerateInput,
                "AGGD fit needs samples of both signs ({left_n} negative, {right_n} positive)"
            );
        }
        let sigma_l = libm::sqrt(left_sq / left_n as f64);
        let sigma_r = libm::sqrt(right_sq / right_n as f64);
        let n = samples.len() as f64;
        let gamma = sigma_l / sigma_r;
        let r_hat = (abs_sum / n) * (abs_sum / n) / (sq_sum / n);
        let r_norm = r_hat * (gamma * gamma * gamma + 1.0) * (gamma + 1.0)
            / ((gamma * gamma + 1.0) * (gamma * gamma + 1.0));
        let alpha = self.invert(r_norm);
        Ok(AggdParams {
            alpha,
            sigma_l,
            sigma_r,
            eta: aggd_mean(alpha, sigma_l, sigma_r),
        })
    }
}

fn check_count(samples: &[f64]) -> Result<()> {
    if samples.len() < MIN_SAMPLES {
        bail!(
            DegenerateInput,
            "need at least {MIN_SAMPLES} samples, got {}",
            samples.len()
        );
    }
    Ok(())
}

/// Mean of an AGGD given its side standard deviations.
///
/// The side scales are `beta = sigma * sqrt(Γ(1/α) / Γ(3/α))` and the mean is
/// `(beta_r - beta_l) Γ(2/α) / Γ(1/α)`.
pub fn aggd_mean(alpha: f64, sigma_l: f64, sigma_r: f64) -> f64 {
    let (g1, g2, g3) = (
        libm::lgamma(1.0 / alpha),
        libm::lgamma(2.0 / alpha),
        libm::lgamma(3.0 / alpha),
    );
    let scale = libm::exp(0.5 * (g1 - g3));
    (sigma_r - sigma_l) * scale * libm::exp(g2 - g1)
}

/// Shape and standard deviation of a zero-mean GGD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GgdParams {
    pub alpha: f64,
    /// Standard deviation, `sqrt(E[x²])`.
    pub sigma: f64,
}

impl GgdParams {
    /// Scale `beta` of the density `∝ exp(-(|x| / beta)^alpha)`.
    pub fn scale(&self) -> f64 {
        self.sigma * libm::exp(0.5 * (libm::lgamma(1.0 / self.alpha) - libm::lgamma(3.0 / self.alpha)))
    }
}

/// Shape, side standard deviations and mean of an AGGD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggdParams {
    pub alpha: f64,
    pub sigma_l: f64,
    pub sigma_r: f64,
    pub eta: f64,
}

impl AggdParams {
    /// Side scales `(beta_l, beta_r)` of the density.
    pub fn scales(&self) -> (f64, f64) {
        let f = libm::exp(0.5 * (libm::lgamma(1.0 / self.alpha) - libm::lgamma(3.0 / self.alpha)));
        (self.sigma_l * f, self.sigma_r * f)
    }
}

/// Fits a GGD using a freshly built [`ShapeGrid`].
pub fn fit_ggd(samples: &[f64]) -> Result<GgdParams> {
    ShapeGrid::new().fit_ggd(samples)
}

/// Fits an AGGD using a freshly built [`ShapeGrid`].
pub fn fit_aggd(samples: &[f64]) -> Result<AggdParams> {
    ShapeGrid::new().fit_aggd(samples)
}
