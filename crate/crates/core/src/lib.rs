//! Numerical core for building and scoring HDR reconstruction benchmarks.
//!
//! Everything here is a pure function over in-memory rasters, so the crate
//! builds without `std` (only `alloc` is required). File formats, dataset
//! layout and the command line live in the `hdr-bench` crate.
//!
//! The pipeline is:
//!
//! 1. [`synthesis`] turns a linear HDR frame into noisy, clipped, 8-bit
//!    exposures using the pixel measurement model
//!    `I = min(Φ·t/g + I0 + n, I_max)` with the noise variance
//!    `Φ·t/g² + σ_read²/g² + σ_adc²`.
//! 2. [`baselines`] reconstructs HDR estimates from those exposures.
//! 3. [`metrics`] scores estimates against ground truth with PSNR (peak
//!    normalized) and PSNR-μ (99th percentile + tanh, then μ-law).
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod error;
pub mod exposure;
pub mod image;
pub mod metrics;
pub mod noise;
pub mod rng;
pub mod stats;
pub mod synthesis;
pub mod tonemap;

pub use error::{Error, Result};
pub use exposure::{ev_to_time_factor, ExposureSettings, MAX_EV_DELTA};
pub use image::{HdrImage, LdrImage, PixelCoord, Raster, Shape};
pub use metrics::{score, ScorePair, PSNR_CAP_DB};
pub use noise::{NoiseParams, PhotonModel};
pub use synthesis::BracketSpec;
pub use tonemap::{mu_law, TonemapParams, CHALLENGE_MU};
