//! Small dense symmetric linear algebra.

use alloc::vec;
use alloc::vec::Vec;

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub dim: usize,
    pub values: Vec<f64>,
    /// Row-major; column `k` is the eigenvector for `values[k]`.
    pub vectors: Vec<f64>,
}

/// Cyclic Jacobi rotations on a row-major symmetric `dim x dim` matrix.
pub fn symmetric_eigen(matrix: &[f64], dim: usize) -> SymmetricEigen {
    assert_eq!(matrix.len(), dim * dim);
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..dim {
            for q in p + 1..dim {
                off += a[p * dim + q] * a[p * dim + q];
            }
        }
        if off <= 1e-30 * scale || off == 0.0 {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p * dim + p], a[q * dim + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..dim {
                    let (akp, akq) = (a[k * dim + p], a[k * dim + q]);
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let (apk, aqk) = (a[p * dim + k], a[q * dim + k]);
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
                for k in 0..dim {
                    let (vkp, vkq) = (v[k * dim + p], v[k * dim + q]);
                    v[k * dim + p] = c * vkp - s * vkq;
                    v[k * dim + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    SymmetricEigen {
        dim,
        values: (0..dim).map(|i| a[i * dim + i]).collect(),
        vectors: v,
    }
}

/// Relative singular-value cutoff used by [`pseudo_inverse`].
pub const PINV_RCOND: f64 = 1e-10;

/// Moore-Penrose pseudo-inverse of a symmetric matrix; eigenvalues whose
/// magnitude is at most `rcond * max|λ|` are treated as zero.
pub fn pseudo_inverse(matrix: &[f64], dim: usize, rcond: f64) -> Vec<f64> {
    let eig = symmetric_eigen(matrix, dim);
    let peak = eig.values.iter().map(|v| libm::fabs(*v)).fold(0.0, f64::max);
    let cutoff = rcond * peak;
    let inv: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| if libm::fabs(l) > cutoff { 1.0 / l } else { 0.0 })
        .collect();
    let mut out = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let mut acc = 0.0;
            for (k, w) in inv.iter().enumerate() {
                acc += eig.vectors[i * dim + k] * w * eig.vectors[j * dim + k];
            }
            out[i * dim + j] = acc;
            out[j * dim + i] = acc;
        }
    }
    out
}
