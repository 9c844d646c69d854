//! Discriminator penalty scorers.
//!
//! These return values only. Gradients for training belong to whatever
//! autodiff framework re-implements the forward math.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::ggd::ShapeGrid;
use crate::image::GrayImage;
use crate::mvg::{score_image_with_grid, MvgModel};

/// Weights of the gradient-norm and quality terms in the discriminator loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyWeights {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl Default for PenaltyWeights {
    fn default() -> Self {
        Self {
            lambda1: 1.0,
            lambda2: 0.1,
        }
    }
}

impl PenaltyWeights {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        if !(lambda1 >= 0.0 && lambda1.is_finite()) || !(lambda2 >= 0.0 && lambda2.is_finite()) {
            bail!(Domain, "penalty weights must be finite and non-negative, got ({lambda1}, {lambda2})");
        }
        Ok(Self { lambda1, lambda2 })
    }
}

/// Gradient of the discriminator output with respect to one input sample.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField(GrayImage);

impl GradientField {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        GrayImage::new(width, height, data).map(Self)
    }

    pub fn as_image(&self) -> &GrayImage {
        &self.0
    }

    pub fn values(&self) -> &[f64] {
        self.0.data()
    }
}

impl From<GrayImage> for GradientField {
    fn from(img: GrayImage) -> Self {
        Self(img)
    }
}

/// `epsilon * x_real + (1 - epsilon) * x_fake`.
pub fn interpolate_sample(x_real: &GrayImage, x_fake: &GrayImage, epsilon: f64) -> Result<GrayImage> {
    if !(0.0..=1.0).contains(&epsilon) {
        bail!(Domain, "epsilon must lie in [0, 1], got {epsilon}");
    }
    x_real.require_same_shape(x_fake)?;
    let data = x_real
        .data()
        .iter()
        .zip(x_fake.data())
        .map(|(r, f)| epsilon * r + (1.0 - epsilon) * f)
        .collect();
    Ok(GrayImage::from_raw(x_real.width(), x_real.height(), data))
}

/// `(‖grad‖₂ - 1)²` over all entries of the field.
pub fn one_gp_penalty(grad: &GradientField) -> f64 {
    let norm = libm::sqrt(grad.values().iter().map(|g| g * g).sum::<f64>());
    (norm - 1.0) * (norm - 1.0)
}

/// NIQE norm of a gradient field against a pristine-gradient model.
///
/// The field is scored as-is; no magnitude or normalization step is applied
/// before the MSCN transform.
pub fn niqe_gp_penalty(grad: &GradientField, pristine: &MvgModel) -> Result<f64> {
    score_image_with_grid(&ShapeGrid::new(), grad.as_image(), pristine)
}

/// Same as [`niqe_gp_penalty`] with a caller-owned shape grid, for batches.
pub fn niqe_gp_penalty_with_grid(grid: &ShapeGrid, grad: &GradientField, pristine: &MvgModel) -> Result<f64> {
    score_image_with_grid(grid, grad.as_image(), pristine)
}

/// `wasserstein_gap + lambda1 * one_gp_mean + lambda2 * quality_mean`.
///
/// The quality slot takes either the SSIM-GP or the NIQE-GP batch mean.
pub fn discriminator_loss_terms(
    wasserstein_gap: f64,
    one_gp_mean: f64,
    quality_mean: f64,
    weights: PenaltyWeights,
) -> Result<f64> {
    if !wasserstein_gap.is_finite() || !one_gp_mean.is_finite() || !quality_mean.is_finite() {
        bail!(Domain, "loss terms must be finite");
    }
    Ok(wasserstein_gap + weights.lambda1 * one_gp_mean + weights.lambda2 * quality_mean)
}
