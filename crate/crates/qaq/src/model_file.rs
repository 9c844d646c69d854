//! Versioned JSON persistence for [`MvgModel`].
//!
//! ```json
//! {
//!   "version": "1",
//!   "feature_dim": 36,
//!   "mu": [...],
//!   "sigma": [...],            // row-major, feature_dim²
//!   "meta": {"patch_size": 96, "sharpness_fraction": 0.75, "scales": 2,
//!            "window_radius": 3, "window_std": 1.1666666666666667,
//!            "sample_count": 41, "input": "image"}
//! }
//! ```
//!
//! Floats are written in shortest round-trip form and parsed exactly.

use std::fs;
use std::path::Path;

use qaq_core::{FieldKind, ModelMeta, MvgModel};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: &str = "1";
pub const SUPPORTED_VERSIONS: &[&str] = &[FORMAT_VERSION];

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaRecord {
    patch_size: usize,
    sharpness_fraction: f64,
    scales: usize,
    window_radius: usize,
    window_std: f64,
    sample_count: usize,
    input: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRecord {
    version: String,
    feature_dim: usize,
    mu: Vec<f64>,
    sigma: Vec<f64>,
    meta: MetaRecord,
}

pub fn to_json(model: &MvgModel) -> String {
    let m = model.meta();
    let record = ModelRecord {
        version: FORMAT_VERSION.to_string(),
        feature_dim: model.dim(),
        mu: model.mu().to_vec(),
        sigma: model.sigma().to_vec(),
        meta: MetaRecord {
            patch_size: m.patch_size,
            sharpness_fraction: m.sharpness_fraction,
            scales: m.scales,
            window_radius: m.window_radius,
            window_std: m.window_std,
            sample_count: m.sample_count,
            input: m.input.as_str().to_string(),
        },
    };
    let mut s = serde_json::to_string_pretty(&record).expect("model record serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str, path: &Path) -> Result<MvgModel> {
    let corrupt = |detail: String| Error::Corrupt {
        path: path.to_path_buf(),
        detail,
    };
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| corrupt(e.to_string()))?;
    // a non-string version (e.g. the number 1) is never a supported one
    let (version, is_string) = match value.get("version") {
        Some(serde_json::Value::String(s)) => (s.clone(), true),
        Some(other) => (format!("{other} (not a string)"), false),
        None => return Err(corrupt("missing `version` field".into())),
    };
    if !is_string || !SUPPORTED_VERSIONS.contains(&version.as_str()) {
        return Err(Error::Version {
            path: path.to_path_buf(),
            found: version,
            supported: SUPPORTED_VERSIONS.join(", "),
        });
    }
    let record: ModelRecord = serde_json::from_value(value).map_err(|e| corrupt(e.to_string()))?;
    if record.mu.len() != record.feature_dim {
        return Err(corrupt(format!(
            "mu has {} entries, feature_dim is {}",
            record.mu.len(),
            record.feature_dim
        )));
    }
    if record.sigma.len() != record.feature_dim * record.feature_dim {
        return Err(corrupt(format!(
            "sigma has {} entries, expected {}",
            record.sigma.len(),
            record.feature_dim * record.feature_dim
        )));
    }
    let input = FieldKind::parse(&record.meta.input)
        .ok_or_else(|| corrupt(format!("unknown input kind {:?}", record.meta.input)))?;
    let meta = ModelMeta {
        patch_size: record.meta.patch_size,
        sharpness_fraction: record.meta.sharpness_fraction,
        scales: record.meta.scales,
        window_radius: record.meta.window_radius,
        window_std: record.meta.window_std,
        sample_count: record.meta.sample_count,
        input,
    };
    meta.feature_config().map_err(|e| corrupt(e.to_string()))?;
    MvgModel::from_parts(record.mu, record.sigma, meta).map_err(|e| corrupt(e.to_string()))
}

pub fn save_model(model: &MvgModel, path: &Path) -> Result<()> {
    fs::write(path, to_json(model)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<MvgModel> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    from_json(&text, path)
}
