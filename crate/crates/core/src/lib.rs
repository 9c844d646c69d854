//! Quality-aware image statistics for GAN regularization.
//!
//! The crate is `no_std` (with `alloc`) and covers:
//!
//! - SSIM maps, the SSIM index and the SSIM-derived distances `d1`, `d2`, `d^Q`;
//! - MSCN coefficients, GGD/AGGD fits and patchwise NIQE features;
//! - multivariate-Gaussian pristine models and the NIQE distance;
//! - value-only discriminator penalties (1-GP, SSIM-GP, NIQE-GP).
//!
//! File formats, decoding and the command-line tool live in the `qaq` crate.
#![no_std]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod features;
pub mod filter;
pub mod ggd;
pub mod image;
pub mod linalg;
pub mod mscn;
pub mod mvg;
pub mod regularizers;
pub mod ssim;
pub mod stats;

pub use error::{Error, Result};
pub use features::{extract_features, FeatureConfig, NiqeFeatures, PatchFeatures};
pub use filter::{downscale_half, gaussian_blur, spatial_gradient};
pub use ggd::{fit_aggd, fit_ggd, AggdParams, GgdParams, ShapeGrid};
pub use image::{cross_covariance, local_stats, GrayImage, LocalStatsField, Window};
pub use mscn::{mscn, paired_products, MscnField, Orientation};
pub use mvg::{fit_mvg, niqe_distance, score_image, FieldKind, ModelMeta, MvgModel};
pub use regularizers::{
    discriminator_loss_terms, interpolate_sample, niqe_gp_penalty, one_gp_penalty, GradientField,
    PenaltyWeights,
};
pub use ssim::{
    d1_distance, d2_distance, dq_distance, ssim_gp_penalty, ssim_index, ssim_maps, SsimMaps,
    SsimParams,
};
