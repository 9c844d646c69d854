//! SSIM component maps and the distances derived from them.
//!
//! With `C3 = C2 / 2` the contrast and structure terms fold into a single
//! `CS` factor, so every quantity here is a function of the two maps
//!
//! ```text
//! L  = (2 mu_P mu_T + C1) / (mu_P² + mu_T² + C1)
//! CS = (2 sigma_PT + C2)  / (sigma_P² + sigma_T² + C2)
//! ```
//!
//! Image-level scores are plain pixel averages of the per-pixel maps.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::image::{covariance_from, moments, GrayImage, Window};

/// Stabilizing constants and the averaging window.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimParams {
    c1: f64,
    c2: f64,
    window: Window,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            c1: (0.01f64 * 255.0) * (0.01 * 255.0),
            c2: (0.03f64 * 255.0) * (0.03 * 255.0),
            window: Window::ssim_default(),
        }
    }
}

impl SsimParams {
    pub fn new(c1: f64, c2: f64, window: Window) -> Result<Self> {
        if !(c1 > 0.0 && c1.is_finite()) || !(c2 > 0.0 && c2.is_finite()) {
            bail!(Domain, "C1 and C2 must be positive, got {c1} and {c2}");
        }
        Ok(Self { c1, c2, window })
    }

    /// Standard constants `(0.01 L)²`, `(0.03 L)²` for dynamic range `L`.
    pub fn for_dynamic_range(range: f64, window: Window) -> Result<Self> {
        Self::new((0.01 * range) * (0.01 * range), (0.03 * range) * (0.03 * range), window)
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn window(&self) -> &Window {
        &self.window
    }
}

/// Per-pixel luminance, contrast-structure and SSIM maps.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimMaps {
    pub width: usize,
    pub height: usize,
    pub luminance: Vec<f64>,
    pub contrast_structure: Vec<f64>,
    pub ssim: Vec<f64>,
}

impl SsimMaps {
    /// `sqrt(max(0, 1 - L))` per pixel.
    pub fn d1_map(&self) -> Vec<f64> {
        self.luminance.iter().map(|l| libm::sqrt((1.0 - l).max(0.0))).collect()
    }

    /// `sqrt(max(0, 1 - CS))` per pixel.
    pub fn d2_map(&self) -> Vec<f64> {
        self.contrast_structure
            .iter()
            .map(|cs| libm::sqrt((1.0 - cs).max(0.0)))
            .collect()
    }

    /// `sqrt(max(0, 2 - L - CS))` per pixel.
    pub fn dq_map(&self) -> Vec<f64> {
        self.luminance
            .iter()
            .zip(&self.contrast_structure)
            .map(|(l, cs)| libm::sqrt((2.0 - l - cs).max(0.0)))
            .collect()
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn ssim_maps(p: &GrayImage, t: &GrayImage, params: &SsimParams) -> Result<SsimMaps> {
    p.require_same_shape(t)?;
    params.window.require_fits(p)?;
    let mp = moments(p, &params.window);
    let mt = moments(t, &params.window);
    let cov = covariance_from(p, t, &params.window, &mp, &mt);

    let n = p.len();
    let mut luminance = Vec::with_capacity(n);
    let mut contrast_structure = Vec::with_capacity(n);
    let mut ssim = Vec::with_capacity(n);
    for (i, &c) in cov.iter().enumerate() {
        let (a, b) = (mp.mu[i], mt.mu[i]);
        let l = (2.0 * a * b + params.c1) / (a * a + b * b + params.c1);
        let cs = (2.0 * c + params.c2) / (mp.variance[i] + mt.variance[i] + params.c2);
        luminance.push(l);
        contrast_structure.push(cs);
        ssim.push(l * cs);
    }
    Ok(SsimMaps {
        width: p.width(),
        height: p.height(),
        luminance,
        contrast_structure,
        ssim,
    })
}

/// Mean SSIM over all pixels.
pub fn ssim_index(p: &GrayImage, t: &GrayImage, params: &SsimParams) -> Result<f64> {
    Ok(mean(&ssim_maps(p, t, params)?.ssim))
}

/// Quality-aware distance: pixel mean of `sqrt(2 - L - CS)`.
pub fn dq_distance(p: &GrayImage, t: &GrayImage, params: &SsimParams) -> Result<f64> {
    Ok(mean(&ssim_maps(p, t, params)?.dq_map()))
}

/// Pixel mean of `sqrt(1 - L)`.
pub fn d1_distance(p: &GrayImage, t: &GrayImage, params: &SsimParams) -> Result<f64> {
    Ok(mean(&ssim_maps(p, t, params)?.d1_map()))
}

/// Pixel mean of `sqrt(1 - CS)`.
pub fn d2_distance(p: &GrayImage, t: &GrayImage, params: &SsimParams) -> Result<f64> {
    Ok(mean(&ssim_maps(p, t, params)?.d2_map()))
}

/// All four image-level scores from a single pass over the maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimSummary {
    pub ssim: f64,
    pub d1: f64,
    pub d2: f64,
    pub dq: f64,
}

pub fn ssim_summary(p: &GrayImage, t: &GrayImage, params: &SsimParams) -> Result<SsimSummary> {
    let maps = ssim_maps(p, t, params)?;
    Ok(SsimSummary {
        ssim: mean(&maps.ssim),
        d1: mean(&maps.d1_map()),
        d2: mean(&maps.d2_map()),
        dq: mean(&maps.dq_map()),
    })
}

/// Default denominator floor for [`ssim_gp_penalty`].
pub const DEFAULT_DQ_FLOOR: f64 = 1e-8;

/// Per-pair SSIM gradient penalty `(|D(X) - D(Y)| / d^Q(X, Y) - 1)²`.
///
/// `d^Q` is replaced by `floor` when smaller, so coincident pairs stay finite.
/// Averaging over pairs is left to the caller.
pub fn ssim_gp_penalty(
    d_real: f64,
    d_fake: f64,
    x: &GrayImage,
    y: &GrayImage,
    params: &SsimParams,
    floor: f64,
) -> Result<f64> {
    if !(floor > 0.0) || !floor.is_finite() {
        bail!(Domain, "distance floor must be positive, got {floor}");
    }
    if !d_real.is_finite() || !d_fake.is_finite() {
        bail!(Domain, "discriminator outputs must be finite");
    }
    let dq = dq_distance(x, y, params)?;
    let ratio = libm::fabs(d_real - d_fake) / dq.max(floor);
    Ok((ratio - 1.0) * (ratio - 1.0))
}
