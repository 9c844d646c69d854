//! Leave-one-out baselines on the bundled photo corpus.

use std::path::{Path, PathBuf};

use qaq::commands::{corpus_files, fit_pristine, FitOptions};
use qaq::load_image;
use qaq_core::{
    niqe_gp_penalty, score_image, spatial_gradient, FeatureConfig, FieldKind, GradientField, GrayImage, MvgModel,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/corpus")
}

fn fit(dir: &Path, kind: FieldKind) -> MvgModel {
    let opts = FitOptions {
        config: FeatureConfig::default(),
        kind,
        threads: None,
    };
    fit_pristine(dir, &opts).unwrap().model
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Scores each image against a model fitted without it.
fn leave_one_out(kind: FieldKind, score: impl Fn(&GrayImage, &MvgModel) -> f64) -> Vec<f64> {
    let files = corpus_files(&corpus_dir()).unwrap();
    files
        .iter()
        .map(|held_out| {
            let dir = tempfile::tempdir().unwrap();
            for f in files.iter().filter(|f| *f != held_out) {
                std::fs::copy(f, dir.path().join(f.file_name().unwrap())).unwrap();
            }
            score(&load_image(held_out).unwrap(), &fit(dir.path(), kind))
        })
        .collect()
}

#[test]
fn corpus_images_score_below_leave_one_out_median() {
    let score = |img: &GrayImage, m: &MvgModel| score_image(img, m).unwrap();
    let baseline = median(leave_one_out(FieldKind::Image, score));
    let full = fit(&corpus_dir(), FieldKind::Image);
    let in_sample: Vec<f64> = corpus_files(&corpus_dir())
        .unwrap()
        .iter()
        .map(|f| score(&load_image(f).unwrap(), &full))
        .collect();
    let below = in_sample.iter().filter(|&&s| s < baseline).count();
    assert!(below * 10 >= in_sample.len() * 9, "{below}/{} below {baseline}: {in_sample:?}", in_sample.len());
}

#[test]
fn pristine_gradients_score_below_leave_one_out_median() {
    let gp = |img: &GrayImage, m: &MvgModel| {
        niqe_gp_penalty(&GradientField::from(spatial_gradient(img).unwrap()), m).unwrap()
    };
    let baseline = median(leave_one_out(FieldKind::Gradient, gp));
    let full = fit(&corpus_dir(), FieldKind::Gradient);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let noise = Normal::new(0.0, 60.0).unwrap();
    let mut below = 0;
    let files = corpus_files(&corpus_dir()).unwrap();
    for f in &files {
        let grad = spatial_gradient(&load_image(f).unwrap()).unwrap();
        let clean = niqe_gp_penalty(&grad.clone().into(), &full).unwrap();
        below += usize::from(clean < baseline);
        let noisy = GrayImage::from_fn(grad.width(), grad.height(), |r, c| grad.get(r, c) + noise.sample(&mut rng))
            .unwrap();
        let corrupted = niqe_gp_penalty(&noisy.into(), &full).unwrap();
        assert!(corrupted > clean, "{}: {corrupted} <= {clean}", f.display());
    }
    assert!(below * 10 >= files.len() * 9, "{below}/{} below {baseline}", files.len());
}
