#![allow(dead_code)]

use qaq_core::{GrayImage, Window};
use rand::Rng;
use rand_distr::{Distribution, Gamma};

pub fn random_image<R: Rng>(rng: &mut R, w: usize, h: usize) -> GrayImage {
    let data = (0..w * h).map(|_| rng.random_range(0.0..255.0)).collect();
    GrayImage::new(w, h, data).unwrap()
}

/// Smooth random field plus noise, closer to photographic statistics than white noise.
pub fn textured_image<R: Rng>(rng: &mut R, w: usize, h: usize) -> GrayImage {
    let (fx, fy, phase) = (rng.random_range(0.02..0.2), rng.random_range(0.02..0.2), rng.random_range(0.0..6.0));
    let data = (0..w * h)
        .map(|i| {
            let (r, c) = ((i / w) as f64, (i % w) as f64);
            let base = 128.0 + 70.0 * (fx * c + phase).sin() * (fy * r).cos();
            (base + rng.random_range(-30.0..30.0)).clamp(0.0, 255.0)
        })
        .collect();
    GrayImage::new(w, h, data).unwrap()
}

/// Independent mirror index (half-sample symmetric), written as an explicit loop.
pub fn mirror(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - 1 - i;
        } else {
            return i as usize;
        }
    }
}

/// Direct windowed moments at one pixel: (mu_p, mu_t, var_p, var_t, cov).
pub fn direct_moments(p: &GrayImage, t: &GrayImage, w: &Window, row: usize, col: usize) -> [f64; 5] {
    let k = w.radius() as isize;
    let px = |m: isize, n: isize, img: &GrayImage| {
        img.get(mirror(row as isize + m, img.height()), mirror(col as isize + n, img.width()))
    };
    let (mut mp, mut mt) = (0.0, 0.0);
    for m in -k..=k {
        for n in -k..=k {
            let wt = w.weight(m, n);
            mp += wt * px(m, n, p);
            mt += wt * px(m, n, t);
        }
    }
    let (mut vp, mut vt, mut c) = (0.0, 0.0, 0.0);
    for m in -k..=k {
        for n in -k..=k {
            let wt = w.weight(m, n);
            let (a, b) = (px(m, n, p) - mp, px(m, n, t) - mt);
            vp += wt * a * a;
            vt += wt * b * b;
            c += wt * a * b;
        }
    }
    [mp, mt, vp, vt, c]
}

/// SSIM index by direct summation of the windowed definitions.
pub fn direct_ssim(p: &GrayImage, t: &GrayImage, w: &Window, c1: f64, c2: f64) -> f64 {
    let mut total = 0.0;
    for row in 0..p.height() {
        for col in 0..p.width() {
            let [mp, mt, vp, vt, c] = direct_moments(p, t, w, row, col);
            let l = (2.0 * mp * mt + c1) / (mp * mp + mt * mt + c1);
            let cs = (2.0 * c + c2) / (vp + vt + c2);
            total += l * cs;
        }
    }
    total / p.len() as f64
}

/// Draws from a zero-mean GGD with shape `alpha` and scale `beta`.
pub fn sample_ggd<R: Rng>(rng: &mut R, n: usize, alpha: f64, beta: f64) -> Vec<f64> {
    let g = Gamma::new(1.0 / alpha, 1.0).unwrap();
    (0..n)
        .map(|_| {
            let mag = beta * g.sample(rng).powf(1.0 / alpha);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

/// Draws from an AGGD with shape `alpha` and side scales `beta_l`, `beta_r`.
pub fn sample_aggd<R: Rng>(rng: &mut R, n: usize, alpha: f64, beta_l: f64, beta_r: f64) -> Vec<f64> {
    let g = Gamma::new(1.0 / alpha, 1.0).unwrap();
    let p_left = beta_l / (beta_l + beta_r);
    (0..n)
        .map(|_| {
            let mag = g.sample(rng).powf(1.0 / alpha);
            if rng.random_bool(p_left) {
                -beta_l * mag
            } else {
                beta_r * mag
            }
        })
        .collect()
}
