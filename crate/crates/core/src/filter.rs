//! Spatial filters: Gaussian blur, 2x box downscale and Sobel gradient magnitude.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::image::{filter_separable, reflect, GrayImage};

/// Gaussian blur with standard deviation `std` pixels.
///
/// The kernel is truncated at `max(1, ceil(3 std))` and renormalized.
pub fn gaussian_blur(img: &GrayImage, std: f64) -> Result<GrayImage> {
    if !(std > 0.0) || !std.is_finite() {
        bail!(Domain, "blur std must be positive and finite, got {std}");
    }
    let radius = (libm::ceil(3.0 * std) as usize).max(1);
    let k = radius as isize;
    let raw: Vec<f64> = (-k..=k)
        .map(|m| libm::exp(-((m * m) as f64) / (2.0 * std * std)))
        .collect();
    let total: f64 = raw.iter().sum();
    let kernel: Vec<f64> = raw.into_iter().map(|w| w / total).collect();
    let data = filter_separable(img.data(), img.width(), img.height(), &kernel);
    Ok(GrayImage::from_raw(img.width(), img.height(), data))
}

/// Halves each dimension (rounding down) by averaging 2x2 blocks.
pub fn downscale_half(img: &GrayImage) -> Result<GrayImage> {
    let (w, h) = (img.width() / 2, img.height() / 2);
    if w == 0 || h == 0 {
        bail!(
            Dimension,
            "cannot halve a {}x{} image",
            img.width(),
            img.height()
        );
    }
    let mut data = Vec::with_capacity(w * h);
    for row in 0..h {
        for col in 0..w {
            let (r, c) = (2 * row, 2 * col);
            let sum = img.get(r, c) + img.get(r, c + 1) + img.get(r + 1, c) + img.get(r + 1, c + 1);
            data.push(0.25 * sum);
        }
    }
    Ok(GrayImage::from_raw(w, h, data))
}

/// Sobel gradient magnitude `sqrt(Gx² + Gy²)` with symmetric reflection padding.
pub fn spatial_gradient(img: &GrayImage) -> Result<GrayImage> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        bail!(Dimension, "Sobel gradient needs at least 3x3, got {w}x{h}");
    }
    let at = |r: isize, c: isize| img.get(reflect(r, h), reflect(c, w));
    let mut data = Vec::with_capacity(w * h);
    for row in 0..h as isize {
        for col in 0..w as isize {
            let gx = (at(row - 1, col + 1) + 2.0 * at(row, col + 1) + at(row + 1, col + 1))
                - (at(row - 1, col - 1) + 2.0 * at(row, col - 1) + at(row + 1, col - 1));
            let gy = (at(row + 1, col - 1) + 2.0 * at(row + 1, col) + at(row + 1, col + 1))
                - (at(row - 1, col - 1) + 2.0 * at(row - 1, col) + at(row - 1, col + 1));
            data.push(libm::sqrt(gx * gx + gy * gy));
        }
    }
    Ok(GrayImage::from_raw(w, h, data))
}
