//! Patchwise natural-scene-statistics features.
//!
//! Each patch contributes 18 values per scale:
//!
//! ```text
//! [ggd.alpha, ggd.sigma²,
//!  for o in {H, V, D1, D2}: aggd.alpha, aggd.eta, aggd.sigma_l², aggd.sigma_r²]
//! ```
//!
//! Scale 1 comes first, then each successive 2x box-downscaled scale.

use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::filter::downscale_half;
use crate::ggd::ShapeGrid;
use crate::image::{GrayImage, Window};
use crate::mscn::{mscn_with_sigma, paired_products, MscnField, Orientation};

/// Values contributed by one patch at one scale.
pub const FEATURES_PER_SCALE: usize = 18;

/// Smallest patch side accepted at the coarsest scale. Keeps every fit at or
/// above [`crate::ggd::MIN_SAMPLES`] samples, including the shifted products.
pub const MIN_COARSE_PATCH: usize = 11;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureConfig {
    /// Patch side at scale 1; halved at each further scale.
    pub patch_size: usize,
    /// Patches whose mean local sigma falls below `fraction * peak` are dropped.
    pub sharpness_fraction: f64,
    pub scales: usize,
    pub window: Window,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            patch_size: 96,
            sharpness_fraction: 0.75,
            scales: 2,
            window: Window::mscn_default(),
        }
    }
}

impl FeatureConfig {
    pub fn feature_dim(&self) -> usize {
        FEATURES_PER_SCALE * self.scales
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales == 0 {
            bail!(Domain, "at least one scale is required");
        }
        if !(0.0..=1.0).contains(&self.sharpness_fraction) {
            bail!(
                Domain,
                "sharpness fraction must lie in [0, 1], got {}",
                self.sharpness_fraction
            );
        }
        if self.patch_size == 0 || !self.patch_size.is_multiple_of(1 << (self.scales - 1)) {
            bail!(
                Domain,
                "patch size {} must be a positive multiple of {}",
                self.patch_size,
                1usize << (self.scales - 1)
            );
        }
        Ok(())
    }

    /// Patch size actually used for an image of the given shape.
    ///
    /// Images narrower than two patches fall back to a single patch spanning
    /// the shorter side, rounded down to a multiple of `2^(scales-1)`.
    pub fn effective_patch(&self, width: usize, height: usize) -> (usize, bool) {
        let short = width.min(height);
        if short >= 2 * self.patch_size {
            (self.patch_size, false)
        } else {
            let step = 1 << (self.scales - 1);
            (short / step * step, true)
        }
    }
}

/// A single patch's (or image's) feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct NiqeFeatures(pub Vec<f64>);

impl NiqeFeatures {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Per-patch features of one image.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchFeatures {
    /// Surviving patches in row-major patch-grid order.
    pub patches: Vec<NiqeFeatures>,
    pub patch_size: usize,
    /// True when the configured patch size did not fit and was shrunk.
    pub clamped: bool,
    /// Patches in the grid before sharpness selection.
    pub total_patches: usize,
}

impl PatchFeatures {
    /// Element-wise mean over surviving patches.
    pub fn mean(&self) -> NiqeFeatures {
        let dim = self.patches[0].len();
        let mut acc = alloc::vec![0.0; dim];
        for p in &self.patches {
            for (a, v) in acc.iter_mut().zip(p.as_slice()) {
                *a += v;
            }
        }
        let n = self.patches.len() as f64;
        NiqeFeatures(acc.into_iter().map(|v| v / n).collect())
    }
}

fn patch_features(grid: &ShapeGrid, field: &MscnField, out: &mut Vec<f64>) -> Result<()> {
    let g = grid.fit_ggd(&field.coefficients)?;
    out.push(g.alpha);
    out.push(g.sigma * g.sigma);
    for o in Orientation::ALL {
        let a = grid.fit_aggd(&paired_products(field, o)?)?;
        out.extend_from_slice(&[a.alpha, a.eta, a.sigma_l * a.sigma_l, a.sigma_r * a.sigma_r]);
    }
    Ok(())
}

/// Extracts per-patch features with sharpness selection at scale 1.
///
/// Patches whose statistics cannot be fitted (flat or single-signed products)
/// are skipped as well; a selection error is raised only when nothing is left.
pub fn extract_features(img: &GrayImage, config: &FeatureConfig) -> Result<PatchFeatures> {
    extract_with_grid(&ShapeGrid::new(), img, config)
}

pub fn extract_with_grid(
    grid: &ShapeGrid,
    img: &GrayImage,
    config: &FeatureConfig,
) -> Result<PatchFeatures> {
    config.validate()?;
    let (patch, clamped) = config.effective_patch(img.width(), img.height());
    let coarse = patch >> (config.scales - 1);
    if coarse < MIN_COARSE_PATCH {
        bail!(
            Dimension,
            "{}x{} image is too small for {} scale(s): coarsest patch would be {coarse}px, need {MIN_COARSE_PATCH}",
            img.width(),
            img.height(),
            config.scales
        );
    }
    let (grid_rows, grid_cols) = (img.height() / patch, img.width() / patch);
    let total = grid_rows * grid_cols;

    let mut fields = Vec::with_capacity(config.scales);
    let mut sharpness = Vec::with_capacity(total);
    let mut current = img.clone();
    for scale in 0..config.scales {
        if scale > 0 {
            current = downscale_half(&current)?;
        }
        let (field, sigma) = mscn_with_sigma(&current, &config.window)?;
        if scale == 0 {
            for pr in 0..grid_rows {
                for pc in 0..grid_cols {
                    let mut sum = 0.0;
                    for r in pr * patch..(pr + 1) * patch {
                        let row = &sigma[r * current.width()..(r + 1) * current.width()];
                        sum += row[pc * patch..(pc + 1) * patch].iter().sum::<f64>();
                    }
                    sharpness.push(sum / (patch * patch) as f64);
                }
            }
        }
        fields.push(field);
    }

    let peak = sharpness.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Selection {
            fraction: config.sharpness_fraction,
            peak,
        });
    }
    let threshold = config.sharpness_fraction * peak;

    let mut patches = Vec::new();
    for (idx, &s) in sharpness.iter().enumerate() {
        if s < threshold {
            continue;
        }
        let (pr, pc) = (idx / grid_cols, idx % grid_cols);
        let mut values = Vec::with_capacity(config.feature_dim());
        let mut ok = true;
        for (scale, field) in fields.iter().enumerate() {
            let p = patch >> scale;
            let block = field.block(pr * p, pc * p, p, p);
            match patch_features(grid, &block, &mut values) {
                Ok(()) => {}
                Err(Error::DegenerateInput(_)) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if ok {
            patches.push(NiqeFeatures(values));
        }
    }
    if patches.is_empty() {
        return Err(Error::Selection {
            fraction: config.sharpness_fraction,
            peak,
        });
    }
    Ok(PatchFeatures {
        patches,
        patch_size: patch,
        clamped,
        total_patches: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn textured(w: usize, h: usize) -> GrayImage {
        let mut s = 99u64;
        GrayImage::from_fn(w, h, |r, c| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let noise = ((s >> 33) % 64) as f64;
            (r as f64 * 0.7 + c as f64 * 0.3) % 128.0 + noise
        })
        .unwrap()
    }

    #[test]
    fn layout_length() {
        let f = extract_features(&textured(200, 200), &FeatureConfig::default()).unwrap();
        assert_eq!(f.patch_size, 96);
        assert!(!f.clamped);
        assert_eq!(f.total_patches, 4);
        assert!(f.patches.iter().all(|p| p.len() == 36));
        assert_eq!(f.mean().len(), 36);
    }

    #[test]
    fn constant_image_is_a_selection_error() {
        let img = GrayImage::filled(200, 200, 128.0).unwrap();
        assert!(matches!(
            extract_features(&img, &FeatureConfig::default()),
            Err(Error::Selection { .. })
        ));
    }

    #[test]
    fn small_images_clamp_to_one_patch() {
        let cfg = FeatureConfig::default();
        let f = extract_features(&textured(48, 48), &cfg).unwrap();
        assert!(f.clamped);
        assert_eq!((f.patch_size, f.total_patches), (48, 1));
        let f = extract_features(&textured(33, 40), &cfg).unwrap();
        assert_eq!(f.patch_size, 32);
        let too_small = extract_features(&textured(20, 20), &cfg);
        assert!(matches!(too_small, Err(Error::Dimension(_))));
    }

    #[test]
    fn config_validation() {
        let cfg = FeatureConfig { sharpness_fraction: 1.5, ..FeatureConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = FeatureConfig { patch_size: 95, ..FeatureConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = FeatureConfig { scales: 0, ..FeatureConfig::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn deterministic() {
        let img = textured(192, 192);
        let cfg = FeatureConfig { sharpness_fraction: 0.0, ..FeatureConfig::default() };
        let a = extract_features(&img, &cfg).unwrap();
        let b = extract_features(&img, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.patches.len(), 4);
    }
}
