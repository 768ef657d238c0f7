//! Reconstruction scoring.
//!
//! * `psnr_linear`: both images divided by the ground-truth peak, then PSNR
//!   with a peak of 1.
//! * `psnr_mu`: both images mapped through `tanh(x / p99(gt))`, then the
//!   μ-law tonemapper, then PSNR with a peak of 1.
//!
//! Normalization constants always come from the ground truth. Estimates
//! are never clamped; values above the reference simply cost more MSE.
//! Channels are pooled into one flat sample set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{HdrImage, Raster};
use crate::stats::{pairwise_sum_by, percentile_linear};
use crate::tonemap::{apply_tonemap, TonemapParams};

/// Returned instead of +∞ when the two rasters are identical; every
/// higher value is clipped to it as well.
pub const PSNR_CAP_DB: f64 = 100.0;

/// Percentile of the ground truth used for PSNR-μ normalization.
pub const MU_NORMALIZATION_PERCENTILE: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    Peak,
    Percentile99Tanh,
}

/// Which normalization was applied and the GT-derived scalar it used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationSpec {
    pub mode: NormalizationMode,
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPair {
    pub estimate: Raster,
    pub gt: Raster,
    pub spec: NormalizationSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScorePair {
    pub psnr_linear: f64,
    pub psnr_mu: f64,
}

/// A [`ScorePair`] together with the constants that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreDetail {
    pub scores: ScorePair,
    pub gt_peak: f64,
    pub gt_p99: f64,
    pub mu: f64,
}

fn normalize_with(
    estimate: &HdrImage,
    gt: &HdrImage,
    spec: NormalizationSpec,
    f: impl Fn(f64) -> f64,
) -> Result<NormalizedPair> {
    let map = |img: &HdrImage| {
        Raster::new(img.shape(), img.data().iter().map(|&v| f(v as f64)).collect())
    };
    Ok(NormalizedPair { estimate: map(estimate)?, gt: map(gt)?, spec })
}

/// Divides both images by `max(gt)`.
pub fn normalize_peak(estimate: &HdrImage, gt: &HdrImage) -> Result<NormalizedPair> {
    estimate.shape().ensure_same(&gt.shape())?;
    let peak = gt.max() as f64;
    if peak <= 0.0 {
        return Err(Error::DegenerateReference { mode: "peak" });
    }
    let spec = NormalizationSpec { mode: NormalizationMode::Peak, reference: peak };
    normalize_with(estimate, gt, spec, |v| v / peak)
}

/// 99th percentile of the flattened ground truth, linearly interpolated.
pub fn gt_p99(gt: &HdrImage) -> f64 {
    percentile_linear(gt.data().iter().map(|&v| v as f64), MU_NORMALIZATION_PERCENTILE)
        .unwrap_or(0.0)
}

/// Maps both images through `tanh(x / p99(gt))`.
pub fn normalize_p99_tanh(estimate: &HdrImage, gt: &HdrImage) -> Result<NormalizedPair> {
    estimate.shape().ensure_same(&gt.shape())?;
    let p99 = gt_p99(gt);
    if p99 <= 0.0 {
        return Err(Error::DegenerateReference { mode: "99th percentile" });
    }
    let spec = NormalizationSpec { mode: NormalizationMode::Percentile99Tanh, reference: p99 };
    normalize_with(estimate, gt, spec, |v| libm::tanh(v / p99))
}

pub fn mse(a: &Raster, b: &Raster) -> Result<f64> {
    a.shape().ensure_same(&b.shape())?;
    let (a, b) = (a.data(), b.data());
    let sum = pairwise_sum_by(a.len(), &|i| {
        let d = a[i] - b[i];
        d * d
    });
    Ok(sum / a.len() as f64)
}

/// `10·log10(max_value² / MSE)`, capped at [`PSNR_CAP_DB`].
pub fn psnr(a: &Raster, b: &Raster, max_value: f64) -> Result<f64> {
    if !(max_value.is_finite() && max_value > 0.0) {
        return Err(Error::InvalidParameter { name: "max_value", value: max_value });
    }
    Ok(psnr_from_mse(mse(a, b)?, max_value))
}

pub fn psnr_from_mse(mse: f64, max_value: f64) -> f64 {
    if mse <= 0.0 {
        return PSNR_CAP_DB;
    }
    (10.0 * libm::log10(max_value * max_value / mse)).min(PSNR_CAP_DB)
}

pub fn score(estimate: &HdrImage, gt: &HdrImage, params: &TonemapParams) -> Result<ScorePair> {
    Ok(score_detailed(estimate, gt, params)?.scores)
}

pub fn score_detailed(
    estimate: &HdrImage,
    gt: &HdrImage,
    params: &TonemapParams,
) -> Result<ScoreDetail> {
    params.validate()?;
    let linear = normalize_peak(estimate, gt)?;
    let psnr_linear = psnr(&linear.estimate, &linear.gt, 1.0)?;
    let squashed = normalize_p99_tanh(estimate, gt)?;
    let est_mu = apply_tonemap(&squashed.estimate, params)?;
    let gt_mu = apply_tonemap(&squashed.gt, params)?;
    let psnr_mu = psnr(&est_mu, &gt_mu, 1.0)?;
    Ok(ScoreDetail {
        scores: ScorePair { psnr_linear, psnr_mu },
        gt_peak: linear.spec.reference,
        gt_p99: squashed.spec.reference,
        mu: params.mu,
    })
}
