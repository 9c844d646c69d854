//! Multivariate Gaussian models over feature vectors and the distance between them.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::features::{extract_with_grid, FeatureConfig, NiqeFeatures};
use crate::ggd::ShapeGrid;
use crate::image::{GrayImage, Window};
use crate::linalg::{pseudo_inverse, PINV_RCOND};

/// What kind of field the features were computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    /// Luminance images.
    Image,
    /// Sobel gradient magnitude of luminance images.
    Gradient,
}

impl FieldKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldKind::Image => "image",
            FieldKind::Gradient => "gradient",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "image" => Some(FieldKind::Image),
            "gradient" => Some(FieldKind::Gradient),
            _ => None,
        }
    }
}

/// Feature-configuration fingerprint stored alongside a model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    pub patch_size: usize,
    pub sharpness_fraction: f64,
    pub scales: usize,
    pub window_radius: usize,
    pub window_std: f64,
    pub sample_count: usize,
    pub input: FieldKind,
}

impl ModelMeta {
    pub fn from_config(config: &FeatureConfig, input: FieldKind, sample_count: usize) -> Result<Self> {
        config.validate()?;
        let Some(std) = config.window.std() else {
            bail!(Domain, "model metadata requires a Gaussian window");
        };
        Ok(Self {
            patch_size: config.patch_size,
            sharpness_fraction: config.sharpness_fraction,
            scales: config.scales,
            window_radius: config.window.radius(),
            window_std: std,
            sample_count,
            input,
        })
    }

    pub fn feature_config(&self) -> Result<FeatureConfig> {
        let config = FeatureConfig {
            patch_size: self.patch_size,
            sharpness_fraction: self.sharpness_fraction,
            scales: self.scales,
            window: Window::gaussian(self.window_radius, self.window_std)?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn feature_dim(&self) -> usize {
        crate::features::FEATURES_PER_SCALE * self.scales
    }

    /// Fails on the first fingerprint field that differs. Sharpness fraction
    /// and sample count describe how a model was fitted, not what its
    /// features mean, so they are not compared.
    pub fn check_compatible(&self, other: &ModelMeta) -> Result<()> {
        fn differ<T: PartialEq + ToString>(field: &'static str, a: T, b: T) -> Result<()> {
            if a != b {
                return Err(Error::IncompatibleModel {
                    field,
                    left: a.to_string(),
                    right: b.to_string(),
                });
            }
            Ok(())
        }
        differ("input", self.input.as_str(), other.input.as_str())?;
        differ("patch_size", self.patch_size, other.patch_size)?;
        differ("scales", self.scales, other.scales)?;
        differ("window_radius", self.window_radius, other.window_radius)?;
        differ("window_std", self.window_std.to_bits(), other.window_std.to_bits())
            .map_err(|_| Error::IncompatibleModel {
                field: "window_std",
                left: format!("{}", self.window_std),
                right: format!("{}", other.window_std),
            })
    }
}

/// Mean vector and covariance matrix of a class of feature vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MvgModel {
    mu: Vec<f64>,
    sigma: Vec<f64>,
    meta: ModelMeta,
}

impl MvgModel {
    /// Validates and assembles a model, e.g. after deserialization.
    pub fn from_parts(mu: Vec<f64>, sigma: Vec<f64>, meta: ModelMeta) -> Result<Self> {
        let dim = mu.len();
        if dim == 0 || dim != meta.feature_dim() {
            bail!(
                Dimension,
                "mean has length {dim}, metadata implies {}",
                meta.feature_dim()
            );
        }
        if sigma.len() != dim * dim {
            bail!(
                Dimension,
                "covariance has {} entries, expected {}",
                sigma.len(),
                dim * dim
            );
        }
        if meta.sample_count < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: meta.sample_count,
            });
        }
        if mu.iter().chain(&sigma).any(|v| !v.is_finite()) {
            bail!(Domain, "model contains non-finite values");
        }
        for i in 0..dim {
            if sigma[i * dim + i] < 0.0 {
                bail!(Domain, "covariance diagonal entry {i} is negative");
            }
            for j in i + 1..dim {
                let (a, b) = (sigma[i * dim + j], sigma[j * dim + i]);
                if libm::fabs(a - b) > 1e-10 * (1.0 + libm::fabs(a).max(libm::fabs(b))) {
                    bail!(Domain, "covariance is not symmetric at ({i}, {j})");
                }
            }
        }
        Ok(Self { mu, sigma, meta })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Row-major covariance.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }
}

fn check_vectors(vectors: &[NiqeFeatures], dim: usize) -> Result<()> {
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            bail!(Dimension, "feature vector {i} has length {}, expected {dim}", v.len());
        }
        if v.as_slice().iter().any(|x| !x.is_finite()) {
            bail!(Domain, "feature vector {i} contains non-finite values");
        }
    }
    Ok(())
}

fn mean_and_scatter(vectors: &[NiqeFeatures], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let n = vectors.len() as f64;
    // accumulate offsets from the first vector so repeated inputs stay exact
    let origin = vectors[0].as_slice();
    let mut offset = vec![0.0; dim];
    for v in vectors {
        for ((o, x), x0) in offset.iter_mut().zip(v.as_slice()).zip(origin) {
            *o += x - x0;
        }
    }
    let mu: Vec<f64> = origin.iter().zip(&offset).map(|(x0, o)| x0 + o / n).collect();
    let mut scatter = vec![0.0; dim * dim];
    for v in vectors {
        let d: Vec<f64> = v.as_slice().iter().zip(&mu).map(|(x, m)| x - m).collect();
        for i in 0..dim {
            for j in i..dim {
                scatter[i * dim + j] += d[i] * d[j];
            }
        }
    }
    for i in 0..dim {
        for j in 0..i {
            scatter[i * dim + j] = scatter[j * dim + i];
        }
    }
    (mu, scatter)
}

/// Sample mean and unbiased (n - 1) covariance of `vectors`.
///
/// `meta.sample_count` is overwritten with the number of vectors.
pub fn fit_mvg(vectors: &[NiqeFeatures], mut meta: ModelMeta) -> Result<MvgModel> {
    if vectors.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: vectors.len(),
        });
    }
    let dim = meta.feature_dim();
    check_vectors(vectors, dim)?;
    let (mu, mut sigma) = mean_and_scatter(vectors, dim);
    let denom = (vectors.len() - 1) as f64;
    for s in &mut sigma {
        *s /= denom;
    }
    meta.sample_count = vectors.len();
    Ok(MvgModel { mu, sigma, meta })
}

/// `sqrt((mu_a - mu_b)ᵀ ((Sigma_a + Sigma_b) / 2)⁺ (mu_a - mu_b))`.
///
/// The averaged covariance is pseudo-inverted with relative cutoff
/// [`PINV_RCOND`], so rank-deficient models still yield a finite distance.
pub fn niqe_distance(a: &MvgModel, b: &MvgModel) -> Result<f64> {
    a.meta.check_compatible(&b.meta)?;
    if a.dim() != b.dim() {
        bail!(Dimension, "model dimensions differ: {} vs {}", a.dim(), b.dim());
    }
    Ok(mvg_distance(&a.mu, &a.sigma, &b.mu, &b.sigma))
}

pub(crate) fn mvg_distance(mu_a: &[f64], sigma_a: &[f64], mu_b: &[f64], sigma_b: &[f64]) -> f64 {
    let dim = mu_a.len();
    let avg: Vec<f64> = sigma_a.iter().zip(sigma_b).map(|(x, y)| 0.5 * (x + y)).collect();
    let inv = pseudo_inverse(&avg, dim, PINV_RCOND);
    let d: Vec<f64> = mu_a.iter().zip(mu_b).map(|(x, y)| x - y).collect();
    let mut q = 0.0;
    for i in 0..dim {
        let row = &inv[i * dim..(i + 1) * dim];
        q += d[i] * row.iter().zip(&d).map(|(m, v)| m * v).sum::<f64>();
    }
    libm::sqrt(q.max(0.0))
}

/// Statistics of a single test image (or field) to compare against a
/// pristine model.
#[derive(Debug, Clone, PartialEq)]
pub struct TestStatistics {
    pub mu: Vec<f64>,
    /// Unbiased covariance, or all zeros when only one patch was available.
    pub sigma: Vec<f64>,
    pub patch_count: usize,
    pub patch_size: usize,
    pub clamped: bool,
}

/// Extracts every patch of `img` under the model's feature configuration
/// (no sharpness selection) and summarizes them as a mean and covariance.
pub fn test_statistics(img: &GrayImage, pristine: &MvgModel) -> Result<TestStatistics> {
    test_statistics_with_grid(&ShapeGrid::new(), img, pristine)
}

pub fn test_statistics_with_grid(
    grid: &ShapeGrid,
    img: &GrayImage,
    pristine: &MvgModel,
) -> Result<TestStatistics> {
    let mut config = pristine.meta.feature_config()?;
    config.sharpness_fraction = 0.0;
    let feats = extract_with_grid(grid, img, &config)?;
    let dim = pristine.dim();
    check_vectors(&feats.patches, dim)?;
    let (mu, mut sigma) = mean_and_scatter(&feats.patches, dim);
    let n = feats.patches.len();
    if n > 1 {
        for s in &mut sigma {
            *s /= (n - 1) as f64;
        }
    }
    Ok(TestStatistics {
        mu,
        sigma,
        patch_count: n,
        patch_size: feats.patch_size,
        clamped: feats.clamped,
    })
}

impl TestStatistics {
    /// Promotes the statistics to a model sharing `pristine`'s fingerprint.
    /// Requires at least two patches.
    pub fn into_model(self, pristine: &MvgModel) -> Result<MvgModel> {
        let mut meta = pristine.meta.clone();
        meta.sample_count = self.patch_count;
        MvgModel::from_parts(self.mu, self.sigma, meta)
    }
}

/// NIQE-style quality score of `img` against `pristine`; lower is more natural.
pub fn score_image(img: &GrayImage, pristine: &MvgModel) -> Result<f64> {
    score_image_with_grid(&ShapeGrid::new(), img, pristine)
}

pub fn score_image_with_grid(grid: &ShapeGrid, img: &GrayImage, pristine: &MvgModel) -> Result<f64> {
    let t = test_statistics_with_grid(grid, img, pristine)?;
    Ok(mvg_distance(&pristine.mu, &pristine.sigma, &t.mu, &t.sigma))
}
