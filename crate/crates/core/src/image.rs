//! Grayscale fields, Gaussian windows and windowed local statistics.
//!
//! Every windowed quantity in the crate (SSIM moments, MSCN normalization,
//! blur) goes through [`filter_separable`], which pads by half-sample
//! symmetric reflection: `d c b a | a b c d | d c b a`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};

/// A 2-D field of real luminance values stored row-major.
///
/// Values are nominally in `[0, 255]` for decoded photographs but any finite
/// real is accepted so that gradient fields can flow through the same code.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            bail!(Dimension, "image must be at least 1x1, got {width}x{height}");
        }
        if data.len() != width * height {
            bail!(
                Dimension,
                "data length {} does not match {width}x{height}",
                data.len()
            );
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            bail!(
                Domain,
                "non-finite value at row {}, column {}",
                pos / width,
                pos % width
            );
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image from `f(row, col)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(row, col));
            }
        }
        Self::new(width, height, data)
    }

    /// Caller guarantees the shape and finiteness invariants.
    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    pub fn same_shape(&self, other: &GrayImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn require_same_shape(&self, other: &GrayImage) -> Result<()> {
        if !self.same_shape(other) {
            bail!(
                Dimension,
                "image shapes differ: {}x{} vs {}x{}",
                self.width,
                self.height,
                other.width,
                other.height
            );
        }
        Ok(())
    }

    /// Copies the `size_h x size_w` block whose top-left corner is `(row, col)`.
    pub fn crop(&self, row: usize, col: usize, size_w: usize, size_h: usize) -> Result<Self> {
        if size_w == 0 || size_h == 0 || row + size_h > self.height || col + size_w > self.width {
            bail!(
                Dimension,
                "crop {size_w}x{size_h} at ({row}, {col}) exceeds {}x{} image",
                self.width,
                self.height
            );
        }
        let mut data = Vec::with_capacity(size_w * size_h);
        for r in row..row + size_h {
            let start = r * self.width + col;
            data.extend_from_slice(&self.data[start..start + size_w]);
        }
        Ok(Self::from_raw(size_w, size_h, data))
    }

    /// Arithmetic mean of all pixels.
    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }
}

/// A normalized, separable `(2K+1) x (2K+1)` weighting window.
///
/// The 2-D weights are the outer product of a normalized 1-D kernel, so
/// they sum to one and are symmetric under horizontal and vertical flips.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    radius: usize,
    std: Option<f64>,
    kernel: Vec<f64>,
    weights: Vec<f64>,
}

impl Window {
    /// Gaussian window, `w[m,n] ∝ exp(-(m²+n²) / (2 std²))`.
    pub fn gaussian(radius: usize, std: f64) -> Result<Self> {
        if radius == 0 {
            bail!(Domain, "window radius must be at least 1");
        }
        if !(std > 0.0) || !std.is_finite() {
            bail!(Domain, "window std must be positive and finite, got {std}");
        }
        Ok(Self::from_kernel(radius, Some(std), gaussian_kernel(radius, std)))
    }

    /// Box window with equal weights `1 / (2K+1)²`.
    pub fn uniform(radius: usize) -> Result<Self> {
        if radius == 0 {
            bail!(Domain, "window radius must be at least 1");
        }
        let d = 2 * radius + 1;
        Ok(Self::from_kernel(radius, None, vec![1.0 / d as f64; d]))
    }

    /// 11x11 Gaussian, std 1.5.
    pub fn ssim_default() -> Self {
        Self::from_kernel(5, Some(1.5), gaussian_kernel(5, 1.5))
    }

    /// 7x7 Gaussian, std 7/6.
    pub fn mscn_default() -> Self {
        Self::from_kernel(3, Some(7.0 / 6.0), gaussian_kernel(3, 7.0 / 6.0))
    }

    fn from_kernel(radius: usize, std: Option<f64>, kernel: Vec<f64>) -> Self {
        let weights = kernel
            .iter()
            .flat_map(|a| kernel.iter().map(move |b| a * b))
            .collect();
        Self {
            radius,
            std,
            kernel,
            weights,
        }
    }

    #[inline]
    pub fn radius(&self) -> usize {
        self.radius
    }

    #[inline]
    pub fn diameter(&self) -> usize {
        2 * self.radius + 1
    }

    /// Gaussian std, `None` for a box window.
    pub fn std(&self) -> Option<f64> {
        self.std
    }

    /// Normalized 1-D factor of the window.
    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    /// Row-major 2-D weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight at offset `(m, n)` from the centre, each in `[-K, K]`.
    pub fn weight(&self, m: isize, n: isize) -> f64 {
        let k = self.radius as isize;
        self.kernel[(m + k) as usize] * self.kernel[(n + k) as usize]
    }

    pub(crate) fn require_fits(&self, img: &GrayImage) -> Result<()> {
        let d = self.diameter();
        if img.width() < d || img.height() < d {
            bail!(
                Dimension,
                "{}x{} image is smaller than the {d}x{d} window",
                img.width(),
                img.height()
            );
        }
        Ok(())
    }
}

fn gaussian_kernel(radius: usize, std: f64) -> Vec<f64> {
    let k = radius as isize;
    let denom = 2.0 * std * std;
    let raw: Vec<f64> = (-k..=k)
        .map(|m| libm::exp(-((m * m) as f64) / denom))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Half-sample symmetric reflection of `i` into `[0, n)`.
#[inline]
pub(crate) fn reflect(i: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let m = i.rem_euclid(period) as usize;
    if m < n {
        m
    } else {
        2 * n - 1 - m
    }
}

/// Correlates `data` (row-major, `width x height`) with the symmetric 1-D
/// `kernel` along rows and then columns.
pub(crate) fn filter_separable(data: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let k = (kernel.len() / 2) as isize;
    let mut horizontal = vec![0.0; data.len()];
    for row in 0..height {
        let line = &data[row * width..(row + 1) * width];
        let out = &mut horizontal[row * width..(row + 1) * width];
        for (col, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (t, w) in kernel.iter().enumerate() {
                acc += w * line[reflect(col as isize + t as isize - k, width)];
            }
            *o = acc;
        }
    }
    let mut out = vec![0.0; data.len()];
    for row in 0..height {
        for (t, w) in kernel.iter().enumerate() {
            let src = reflect(row as isize + t as isize - k, height);
            let src_line = &horizontal[src * width..(src + 1) * width];
            let dst = &mut out[row * width..(row + 1) * width];
            for (d, s) in dst.iter_mut().zip(src_line) {
                *d += w * s;
            }
        }
    }
    out
}

/// Per-pixel windowed mean and standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalStatsField {
    pub width: usize,
    pub height: usize,
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
}

/// Windowed first and second raw moments, shared by SSIM and MSCN.
pub(crate) struct Moments {
    pub mu: Vec<f64>,
    /// `E[x²] - mu²` clamped at zero.
    pub variance: Vec<f64>,
}

pub(crate) fn moments(img: &GrayImage, window: &Window) -> Moments {
    let (w, h) = (img.width(), img.height());
    let mu = filter_separable(img.data(), w, h, window.kernel());
    let squares: Vec<f64> = img.data().iter().map(|v| v * v).collect();
    let second = filter_separable(&squares, w, h, window.kernel());
    let variance = second
        .iter()
        .zip(&mu)
        .map(|(e2, m)| (e2 - m * m).max(0.0))
        .collect();
    Moments { mu, variance }
}

/// Weighted local mean and standard deviation under `window`.
pub fn local_stats(img: &GrayImage, window: &Window) -> Result<LocalStatsField> {
    window.require_fits(img)?;
    let Moments { mu, variance } = moments(img, window);
    Ok(LocalStatsField {
        width: img.width(),
        height: img.height(),
        mu,
        sigma: variance.into_iter().map(libm::sqrt).collect(),
    })
}

/// Windowed cross covariance `E[(P - mu_P)(T - mu_T)]`.
///
/// The raw estimate `E[PT] - mu_P mu_T` is clamped to
/// `±sqrt(var_P var_T)` so cancellation noise never breaks Cauchy-Schwarz.
pub fn cross_covariance(p: &GrayImage, t: &GrayImage, window: &Window) -> Result<Vec<f64>> {
    p.require_same_shape(t)?;
    window.require_fits(p)?;
    let mp = moments(p, window);
    let mt = moments(t, window);
    Ok(covariance_from(p, t, window, &mp, &mt))
}

pub(crate) fn covariance_from(
    p: &GrayImage,
    t: &GrayImage,
    window: &Window,
    mp: &Moments,
    mt: &Moments,
) -> Vec<f64> {
    let products: Vec<f64> = p.data().iter().zip(t.data()).map(|(a, b)| a * b).collect();
    let cross = filter_separable(&products, p.width(), p.height(), window.kernel());
    cross
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let raw = e - mp.mu[i] * mt.mu[i];
            let bound = libm::sqrt(mp.variance[i] * mt.variance[i]);
            raw.clamp(-bound, bound)
        })
        .collect()
}
