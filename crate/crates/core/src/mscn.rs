//! Mean-subtracted contrast-normalized coefficients and neighbour products.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::image::{moments, GrayImage, Window};

/// MSCN coefficients `(I - mu) / (sigma + 1)` with the source's shape.
#[derive(Debug, Clone, PartialEq)]
pub struct MscnField {
    pub width: usize,
    pub height: usize,
    pub coefficients: Vec<f64>,
}

impl MscnField {
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.coefficients[row * self.width + col]
    }

    /// Copies a `size_w x size_h` block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size_w: usize, size_h: usize) -> MscnField {
        let mut coefficients = Vec::with_capacity(size_w * size_h);
        for r in row..row + size_h {
            let start = r * self.width + col;
            coefficients.extend_from_slice(&self.coefficients[start..start + size_w]);
        }
        MscnField {
            width: size_w,
            height: size_h,
            coefficients,
        }
    }
}

pub fn mscn(img: &GrayImage, window: &Window) -> Result<MscnField> {
    Ok(mscn_with_sigma(img, window)?.0)
}

/// MSCN field together with the local standard-deviation map it was normalized by.
pub(crate) fn mscn_with_sigma(img: &GrayImage, window: &Window) -> Result<(MscnField, Vec<f64>)> {
    window.require_fits(img)?;
    let m = moments(img, window);
    let sigma: Vec<f64> = m.variance.iter().map(|v| libm::sqrt(*v)).collect();
    let coefficients = img
        .data()
        .iter()
        .zip(&m.mu)
        .zip(&sigma)
        .map(|((x, mu), s)| (x - mu) / (s + 1.0))
        .collect();
    Ok((
        MscnField {
            width: img.width(),
            height: img.height(),
            coefficients,
        },
        sigma,
    ))
}

/// Neighbour direction for pairwise products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `(i, j) * (i, j+1)`
    Horizontal,
    /// `(i, j) * (i+1, j)`
    Vertical,
    /// `(i, j) * (i+1, j+1)`
    MainDiagonal,
    /// `(i, j) * (i+1, j-1)`
    AntiDiagonal,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [
        Orientation::Horizontal,
        Orientation::Vertical,
        Orientation::MainDiagonal,
        Orientation::AntiDiagonal,
    ];
}

/// Products of each coefficient with its neighbour in `orientation`, row-major
/// over the positions where the neighbour exists.
pub fn paired_products(field: &MscnField, orientation: Orientation) -> Result<Vec<f64>> {
    let (w, h) = (field.width, field.height);
    if w < 2 || h < 2 {
        bail!(Dimension, "paired products need at least 2x2, got {w}x{h}");
    }
    let (rows, cols, dr, dc): (core::ops::Range<usize>, core::ops::Range<usize>, usize, isize) =
        match orientation {
            Orientation::Horizontal => (0..h, 0..w - 1, 0, 1),
            Orientation::Vertical => (0..h - 1, 0..w, 1, 0),
            Orientation::MainDiagonal => (0..h - 1, 0..w - 1, 1, 1),
            Orientation::AntiDiagonal => (0..h - 1, 1..w, 1, -1),
        };
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for r in rows {
        for c in cols.clone() {
            let nc = (c as isize + dc) as usize;
            out.push(field.get(r, c) * field.get(r + dr, nc));
        }
    }
    Ok(out)
}
