//! Implementations behind the `qaq` subcommands.
//!
//! Each function returns the exact text the command prints on standard
//! output so that tests can compare bytes without spawning a process.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qaq_core::ggd::ShapeGrid;
use qaq_core::mvg::score_image_with_grid;
use qaq_core::ssim::ssim_summary;
use qaq_core::{
    features::extract_with_grid, fit_mvg, gaussian_blur, mscn, spatial_gradient, stats, FeatureConfig, FieldKind,
    GrayImage, ModelMeta, MvgModel, NiqeFeatures, PenaltyWeights, SsimParams, Window,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::load_image;

/// Environment variable capping the worker threads of `fit-pristine`.
pub const THREADS_ENV: &str = "QAQ_THREADS";

fn prepare(img: GrayImage, kind: FieldKind) -> Result<GrayImage> {
    Ok(match kind {
        FieldKind::Image => img,
        FieldKind::Gradient => spatial_gradient(&img)?,
    })
}

pub fn score_ssim(reference: &Path, test: &Path) -> Result<String> {
    let (p, t) = (load_image(reference)?, load_image(test)?);
    let s = ssim_summary(&p, &t, &SsimParams::default())?;
    Ok(format!(
        "SSIM {:.6}\nd1 {:.6}\nd2 {:.6}\ndQ {:.6}\n",
        s.ssim, s.d1, s.d2, s.dq
    ))
}

/// Corpus images: `.png` and `.pgm` files directly inside `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|source| Error::Io {
                path: dir.to_path_buf(),
                source,
            })?
            .path();
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if path.is_file() && matches!(ext.as_deref(), Some("png" | "pgm")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    pub config: FeatureConfig,
    pub kind: FieldKind,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
}

#[derive(Debug)]
pub struct FitReport {
    pub model: MvgModel,
    pub images: usize,
    pub patches: usize,
    pub warnings: Vec<String>,
}

enum ImageOutcome {
    Patches(Vec<NiqeFeatures>, Option<String>),
    Rejected(String),
}

/// Extracts features from every corpus image (in parallel, reduced in file
/// order) and fits the pristine model.
pub fn fit_pristine(dir: &Path, opts: &FitOptions) -> Result<FitReport> {
    let files = corpus_files(dir)?;
    if files.len() < 2 {
        return Err(Error::Input(format!(
            "corpus {} holds {} usable image(s); at least 2 PNG/PGM files are required",
            dir.display(),
            files.len()
        )));
    }
    opts.config.validate()?;
    let meta = ModelMeta::from_config(&opts.config, opts.kind, 0)?;
    let grid = ShapeGrid::new();

    let work = || -> Vec<Result<ImageOutcome>> {
        files
            .par_iter()
            .map(|path| {
                let img = prepare(load_image(path)?, opts.kind)?;
                match extract_with_grid(&grid, &img, &opts.config) {
                    Ok(f) => {
                        let warn = f.clamped.then(|| {
                            format!(
                                "warning: {}: {}x{} image is smaller than two {}px patches; patch size clamped to {}",
                                path.display(),
                                img.width(),
                                img.height(),
                                opts.config.patch_size,
                                f.patch_size
                            )
                        });
                        Ok(ImageOutcome::Patches(f.patches, warn))
                    }
                    Err(e @ qaq_core::Error::Selection { .. }) => {
                        Ok(ImageOutcome::Rejected(format!("warning: {}: {e}", path.display())))
                    }
                    Err(e) => Err(e.into()),
                }
            })
            .collect()
    };
    let outcomes = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    };

    let mut vectors = Vec::new();
    let mut warnings = Vec::new();
    let mut images = 0;
    for outcome in outcomes {
        match outcome? {
            ImageOutcome::Patches(p, warn) => {
                images += 1;
                vectors.extend(p);
                warnings.extend(warn);
            }
            ImageOutcome::Rejected(w) => warnings.push(w),
        }
    }
    if vectors.len() < 2 {
        return Err(Error::Degenerate(format!(
            "only {} patch(es) survived sharpness selection (fraction {}); lower --sharpness",
            vectors.len(),
            opts.config.sharpness_fraction
        )));
    }
    let patches = vectors.len();
    let model = fit_mvg(&vectors, meta)?;
    Ok(FitReport {
        model,
        images,
        patches,
        warnings,
    })
}

/// Scores `image` against `model`; `kind` must match the model's input kind.
pub fn score_niqe(image: &Path, model: &MvgModel, kind: FieldKind) -> Result<f64> {
    if model.meta().input != kind {
        return Err(qaq_core::Error::IncompatibleModel {
            field: "input",
            left: model.meta().input.as_str().to_string(),
            right: kind.as_str().to_string(),
        }
        .into());
    }
    let img = prepare(load_image(image)?, kind)?;
    Ok(score_image_with_grid(&ShapeGrid::new(), &img, model)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistortionKind {
    Blur,
    Awgn,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionSpec {
    pub kind: DistortionKind,
    /// Blur std in pixels, or noise std in luminance units.
    pub level: f64,
    pub seed: u64,
}

/// Applies the distortion; the result is clamped to `[0, 255]`.
pub fn distort(img: &GrayImage, spec: &DistortionSpec) -> Result<GrayImage> {
    if !spec.level.is_finite() || spec.level <= 0.0 {
        return Err(Error::Input(format!(
            "distortion level must be positive, got {}",
            spec.level
        )));
    }
    let out = match spec.kind {
        DistortionKind::Blur => gaussian_blur(img, spec.level)?,
        DistortionKind::Awgn => {
            let normal = Normal::new(0.0, spec.level).map_err(|e| Error::Input(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let data = img
                .data()
                .iter()
                .map(|v| (v + normal.sample(&mut rng)).clamp(0.0, 255.0))
                .collect();
            GrayImage::new(img.width(), img.height(), data)?
        }
    };
    Ok(out)
}

/// CSV rows `bin_center,normalized_count` of the MSCN histogram.
pub fn mscn_hist(img: &GrayImage, gradient: bool, bins: usize, lo: f64, hi: f64) -> Result<String> {
    let field = if gradient {
        spatial_gradient(img)?
    } else {
        img.clone()
    };
    let coeffs = mscn(&field, &Window::mscn_default())?;
    let hist = stats::histogram(&coeffs.coefficients, bins, lo, hi)?;
    let mut out = String::new();
    for (center, frac) in hist {
        writeln!(out, "{center:.6},{frac:.6}").expect("writing to a String");
    }
    Ok(out)
}

pub fn penalty_eval(gap: f64, one_gp: f64, quality: f64, weights: PenaltyWeights) -> Result<String> {
    let total = qaq_core::discriminator_loss_terms(gap, one_gp, quality, weights)?;
    Ok(format!("{total:.6}\n"))
}
