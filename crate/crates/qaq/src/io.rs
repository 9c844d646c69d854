//! Image decoding and encoding.
//!
//! Accepts 8-bit PNG (gray, gray+alpha, RGB, RGBA, palette) and binary PGM
//! (`P5`, maxval ≤ 255). Color is reduced to Rec.601 luma
//! `0.299 R + 0.587 G + 0.114 B`; alpha is ignored.

use std::fs;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat};
use qaq_core::GrayImage;

use crate::error::{Error, Result};

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

fn format_err(path: &Path, detail: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        detail: detail.into(),
    }
}

/// Rec.601 luma of an 8-bit RGB triple.
pub fn luma601(r: u8, g: u8, b: u8) -> f64 {
    0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64
}

pub fn load_image(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_image(&bytes, path)
}

/// Decodes an in-memory PNG or PGM; `path` is used only in error messages.
pub fn decode_image(bytes: &[u8], path: &Path) -> Result<GrayImage> {
    let format = if bytes.starts_with(PNG_MAGIC) {
        ImageFormat::Png
    } else if bytes.starts_with(b"P5") {
        ImageFormat::Pnm
    } else if bytes.len() >= 2 && bytes[0] == b'P' && bytes[1].is_ascii_digit() {
        return Err(format_err(
            path,
            format!("PNM subtype P{} (only binary P5 graymaps are supported)", bytes[1] as char),
        ));
    } else {
        return Err(format_err(path, "format (expected PNG or binary PGM)"));
    };
    let decoded = image::load_from_memory_with_format(bytes, format)
        .map_err(|e| format_err(path, format!("decode failed: {e}")))?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let data: Vec<f64> = match decoded {
        DynamicImage::ImageLuma8(img) => img.into_raw().into_iter().map(f64::from).collect(),
        DynamicImage::ImageLumaA8(img) => img.pixels().map(|p| p.0[0] as f64).collect(),
        DynamicImage::ImageRgb8(img) => img.pixels().map(|p| luma601(p.0[0], p.0[1], p.0[2])).collect(),
        DynamicImage::ImageRgba8(img) => img.pixels().map(|p| luma601(p.0[0], p.0[1], p.0[2])).collect(),
        other => {
            let color = other.color();
            return Err(format_err(
                path,
                format!(
                    "bit depth {} ({color:?}); only 8-bit samples are supported",
                    color.bits_per_pixel() / color.channel_count() as u16
                ),
            ));
        }
    };
    Ok(GrayImage::new(w, h, data)?)
}

/// Rounds to the nearest integer and clamps to `[0, 255]`.
pub fn quantize(img: &GrayImage) -> Vec<u8> {
    img.data().iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect()
}

/// Writes an 8-bit binary PGM (`P5`).
pub fn save_pgm(img: &GrayImage, path: &Path) -> Result<()> {
    let mut out = Vec::new();
    PnmEncoder::new(&mut out)
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
        .write_image(
            &quantize(img),
            img.width() as u32,
            img.height() as u32,
            ExtendedColorType::L8,
        )
        .map_err(|e| Error::Input(format!("cannot encode {}: {e}", path.display())))?;
    fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
