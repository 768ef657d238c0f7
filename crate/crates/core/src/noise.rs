//! Sensor noise: photon shot noise, read noise and ADC noise.
//!
//! For a pixel below saturation the output-referred noise `n` has
//!
//! ```text
//! Var(n) = Φ·t/g² + σ_read²/g² + σ_adc²
//! ```
//!
//! The photon term is realised as an exact Poisson electron count
//! `e ~ Poisson(Φ·t)` referred to the output as `(e − Φ·t)/g`; read noise
//! (in electrons) and ADC noise (in output units) are Gaussian.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exposure::ExposureSettings;
use crate::image::{HdrImage, Raster};
use crate::rng::{substream, FrameKey};

/// Above this mean electron count the Poisson sampler is replaced by its
/// Gaussian limit (relative skew < 1e-6).
const POISSON_GAUSSIAN_CUTOVER: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhotonModel {
    /// Exact Poisson electron counts.
    #[default]
    Poisson,
    /// Zero-mean Gaussian with the Poisson variance; faster on huge batches.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseParams {
    /// Read noise standard deviation, in electrons.
    pub sigma_read: f64,
    /// ADC and quantization noise standard deviation, in output units.
    pub sigma_adc: f64,
    pub photon_noise_enabled: bool,
    pub photon_model: PhotonModel,
    pub seed: u64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams {
            sigma_read: 10.0,
            sigma_adc: 0.5 / 255.0,
            photon_noise_enabled: true,
            photon_model: PhotonModel::Poisson,
            seed: 0,
        }
    }
}

impl NoiseParams {
    /// No noise at all; synthesis becomes a deterministic function of the scene.
    pub fn disabled() -> Self {
        NoiseParams { sigma_read: 0.0, sigma_adc: 0.0, photon_noise_enabled: false, ..Default::default() }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        NoiseParams { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("sigma_read", self.sigma_read), ("sigma_adc", self.sigma_adc)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter { name, value: v });
            }
        }
        Ok(())
    }

    pub fn is_silent(&self) -> bool {
        !self.photon_noise_enabled && self.sigma_read == 0.0 && self.sigma_adc == 0.0
    }

    /// Output-referred noise variance for scene radiance `phi`.
    pub fn variance(&self, phi: f64, exp: &ExposureSettings) -> f64 {
        let g2 = exp.g * exp.g;
        let photon = if self.photon_noise_enabled { phi * exp.t / g2 } else { 0.0 };
        photon + self.sigma_read * self.sigma_read / g2 + self.sigma_adc * self.sigma_adc
    }
}

/// Samples one noise field using frame key `(image 0, frame 0)`.
pub fn sample_noise(scene: &HdrImage, exp: &ExposureSettings, noise: &NoiseParams) -> Result<Raster> {
    sample_noise_for(scene, exp, noise, FrameKey::default())
}

/// Samples the output-referred noise field for one frame. Each channel
/// plane draws from its own substream of `noise.seed`.
pub fn sample_noise_for(
    scene: &HdrImage,
    exp: &ExposureSettings,
    noise: &NoiseParams,
    key: FrameKey,
) -> Result<Raster> {
    exp.validate()?;
    noise.validate()?;
    let shape = scene.shape();
    let mut out = alloc::vec![0.0f64; shape.len()];
    if noise.is_silent() {
        return Raster::new(shape, out);
    }
    let read_sd = noise.sigma_read / exp.g;
    for c in 0..shape.channels {
        let mut rng = substream(noise.seed, key.channel(c as u32));
        for i in (c..shape.len()).step_by(shape.channels) {
            let phi = scene.data()[i] as f64;
            let mut n = 0.0;
            if noise.photon_noise_enabled {
                n += photon_term(phi * exp.t, noise.photon_model, &mut rng) / exp.g;
            }
            if read_sd > 0.0 {
                n += read_sd * rng.sample::<f64, _>(StandardNormal);
            }
            if noise.sigma_adc > 0.0 {
                n += noise.sigma_adc * rng.sample::<f64, _>(StandardNormal);
            }
            out[i] = n;
        }
    }
    Raster::new(shape, out)
}

/// Zero-mean photon noise in electrons for a mean count `lambda`.
fn photon_term<R: Rng + ?Sized>(lambda: f64, model: PhotonModel, rng: &mut R) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    match model {
        PhotonModel::Poisson if lambda < POISSON_GAUSSIAN_CUTOVER => {
            // lambda is finite and positive here, so construction cannot fail.
            let count: f64 = Poisson::new(lambda).map(|p| p.sample(rng)).unwrap_or(lambda);
            count - lambda
        }
        _ => libm::sqrt(lambda) * rng.sample::<f64, _>(StandardNormal),
    }
}

/// Empirical mean and (population) variance, for tests and diagnostics.
pub fn moments(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = crate::stats::pairwise_sum(samples) / n;
    let centered: Vec<f64> = samples.iter().map(|v| (v - mean) * (v - mean)).collect();
    (mean, crate::stats::pairwise_sum(&centered) / n)
}
