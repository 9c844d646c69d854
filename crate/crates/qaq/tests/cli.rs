use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qaq::{load_image, save_pgm};
use qaq_core::GrayImage;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/corpus")
}

fn corpus_image(name: &str) -> PathBuf {
    corpus_dir().join(format!("{name}.png"))
}

fn qaq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaq"))
        .args(args)
        .env_remove("QAQ_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn field(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix(key).map(|v| v.trim().parse().unwrap()))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
}

#[test]
fn identical_images_have_unit_ssim_and_zero_distance() {
    let cam = corpus_image("camera");
    let o = qaq(&["score-ssim", s(&cam), s(&cam)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "SSIM 1.000000\nd1 0.000000\nd2 0.000000\ndQ 0.000000\n");
}

#[test]
fn blurred_copy_lowers_ssim() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("blur.pgm");
    let cam = corpus_image("camera");
    assert!(qaq(&["distort", s(&cam), s(&out), "--kind", "blur", "--level", "2"]).status.success());
    let o = stdout(&qaq(&["score-ssim", s(&cam), s(&out)]));
    assert!(field(&o, "SSIM") < 0.95);
    assert!(field(&o, "dQ") > 0.0);
    assert!(field(&o, "d1") < field(&o, "d2"), "blur mostly damages structure: {o}");
}

#[test]
fn mismatched_dimensions_exit_2() {
    let o = qaq(&["score-ssim", s(&corpus_image("camera")), s(&corpus_image("coins"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn missing_or_unsupported_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let ascii = dir.path().join("ascii.pgm");
    std::fs::write(&ascii, "P2\n2 2\n255\n0 1 2 3\n").unwrap();
    assert_eq!(qaq(&["mscn-hist", s(&ascii)]).status.code(), Some(2));
    assert_eq!(qaq(&["mscn-hist", "/nonexistent/x.png"]).status.code(), Some(2));
}

#[test]
fn awgn_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let cam = corpus_image("camera");
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = qaq(&["distort", s(&cam), s(&out), "--kind", "awgn", "--level", "15", "--seed", seed]);
        assert!(o.status.success());
        std::fs::read(out).unwrap()
    };
    let (a, b, c) = (run("a.pgm", "3"), run("b.pgm", "3"), run("c.pgm", "4"));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn invalid_distortion_level_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.pgm");
    let cam = corpus_image("camera");
    for level in ["-1", "0", "nan"] {
        let o = qaq(&["distort", s(&cam), s(&out), "--kind", "blur", "--level", level]);
        assert_eq!(o.status.code(), Some(2), "level {level}");
    }
}

#[test]
fn mscn_histogram_shape() {
    let o = stdout(&qaq(&["mscn-hist", s(&corpus_image("brick")), "--bins", "61"]));
    let rows: Vec<(f64, f64)> = o
        .lines()
        .map(|l| {
            let (c, f) = l.split_once(',').unwrap();
            (c.parse().unwrap(), f.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 61);
    let total: f64 = rows.iter().map(|r| r.1).sum();
    assert!((total - 1.0).abs() < 1e-4);
    let mode = rows.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
    assert!(mode.abs() <= 0.25, "mode at {mode}");
    assert!(stdout(&qaq(&["mscn-hist", s(&corpus_image("brick")), "--gradient"])).lines().count() == 101);
}

#[test]
fn constant_image_histogram_is_a_spike_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.pgm");
    save_pgm(&GrayImage::filled(20, 20, 90.0).unwrap(), &flat).unwrap();
    let o = stdout(&qaq(&["mscn-hist", s(&flat), "--bins", "5", "--range", "-1", "1"]));
    assert_eq!(o, "-0.800000,0.000000\n-0.400000,0.000000\n0.000000,1.000000\n0.400000,0.000000\n0.800000,0.000000\n");
}

#[test]
fn penalty_eval_composes_terms() {
    let o = qaq(&["penalty-eval", "--gap", "2", "--one-gp", "0.5", "--quality", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2.800000");
    let o = qaq(&["penalty-eval", "--gap", "-1", "--one-gp", "1", "--quality", "2", "--lambda1", "10", "--lambda2", "0"]);
    assert_eq!(stdout(&o).trim(), "9.000000");
    assert_eq!(qaq(&["penalty-eval", "--gap", "0", "--one-gp", "-1", "--quality", "0"]).status.code(), Some(2));
}

fn fit(corpus: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["fit-pristine", s(corpus), s(out)];
    args.extend_from_slice(extra);
    qaq(&args)
}

#[test]
fn niqe_scores_track_blur_and_model_kind() {
    let dir = tempfile::tempdir().unwrap();
    let (img_model, grad_model) = (dir.path().join("img.json"), dir.path().join("grad.json"));
    let o = fit(&corpus_dir(), &img_model, &[]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("images 12\npatches "));
    assert!(fit(&corpus_dir(), &grad_model, &["--gradient"]).status.success());

    let cam = corpus_image("camera");
    let blurred = dir.path().join("blur.pgm");
    assert!(qaq(&["distort", s(&cam), s(&blurred), "--kind", "blur", "--level", "3"]).status.success());
    let score = |img: &Path, model: &Path, gradient: bool| {
        let mut args = vec!["score-niqe", s(img), "--model", s(model)];
        if gradient {
            args.push("--gradient");
        }
        let o = qaq(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o).trim().parse::<f64>().unwrap()
    };
    assert!(score(&blurred, &img_model, false) > score(&cam, &img_model, false));
    assert!(score(&blurred, &grad_model, true) > score(&cam, &grad_model, true));
    assert_eq!(score(&cam, &img_model, false), score(&cam, &img_model, false));

    assert_eq!(qaq(&["score-niqe", s(&cam), "--model", s(&grad_model)]).status.code(), Some(4));
    assert_eq!(
        qaq(&["score-niqe", s(&cam), "--model", s(&img_model), "--gradient"]).status.code(),
        Some(4)
    );
    let flat = dir.path().join("flat.pgm");
    save_pgm(&GrayImage::filled(128, 128, 7.0).unwrap(), &flat).unwrap();
    assert_eq!(qaq(&["score-niqe", s(&flat), "--model", s(&img_model)]).status.code(), Some(3));
}

#[test]
fn model_with_different_patch_size_is_incompatible_only_when_used() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    assert!(fit(&corpus_dir(), &m, &["--patch-size", "64"]).status.success());
    let o = qaq(&["score-niqe", s(&corpus_image("moon")), "--model", s(&m)]);
    assert!(o.status.success(), "a 64px model still scores images");
}

#[test]
fn small_images_are_clamped_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("small");
    std::fs::create_dir(&corpus).unwrap();
    for (i, name) in ["camera", "brick", "gravel", "coffee"].iter().enumerate() {
        let img = load_image(&corpus_image(name)).unwrap();
        save_pgm(&img.crop(40 + 10 * i, 60, 48, 48).unwrap(), &corpus.join(format!("{name}.pgm"))).unwrap();
    }
    let out = dir.path().join("m.json");
    let o = fit(&corpus, &out, &["--scales", "1", "--sharpness", "0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().filter(|l| l.starts_with("warning:") && l.contains("clamped to 48")).count(), 4);
    assert_eq!(stdout(&o), "images 4\npatches 4\n");
}

#[test]
fn degenerate_corpora() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    std::fs::write(empty.join("notes.txt"), "not an image").unwrap();
    assert_eq!(fit(&empty, &dir.path().join("a.json"), &[]).status.code(), Some(2));

    let flat = dir.path().join("flat");
    std::fs::create_dir(&flat).unwrap();
    for v in [10.0, 200.0, 77.0] {
        save_pgm(&GrayImage::filled(200, 200, v).unwrap(), &flat.join(format!("{v}.pgm"))).unwrap();
    }
    let o = fit(&flat, &dir.path().join("b.json"), &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!dir.path().join("b.json").exists());

    let o = fit(&corpus_dir(), &dir.path().join("c.json"), &["--patch-size", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fit(&corpus_dir(), &dir.path().join("d.json"), &["--sharpness", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repeated_fits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert!(fit(&corpus_dir(), &a, &[]).status.success());
    assert!(fit(&corpus_dir(), &b, &[]).status.success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}
