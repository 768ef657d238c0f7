//! HDR → bracketed 8-bit LDR synthesis.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exposure::{ExposureSettings, MAX_EV_DELTA};
use crate::image::{HdrImage, LdrImage, Raster};
use crate::noise::{sample_noise_for, NoiseParams};
use crate::rng::FrameKey;

/// Exposure offsets of a bracket around a medium frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketSpec {
    pub ev_deltas: Vec<i32>,
    pub base_exposure: ExposureSettings,
}

impl BracketSpec {
    pub fn new(ev_deltas: Vec<i32>, base_exposure: ExposureSettings) -> Result<Self> {
        let spec = BracketSpec { ev_deltas, base_exposure };
        spec.validate()?;
        Ok(spec)
    }

    /// Symmetric short/medium/long bracket `[-step, 0, +step]`.
    pub fn symmetric(step: i32, base_exposure: ExposureSettings) -> Result<Self> {
        if step <= 0 {
            return Err(Error::InvalidBracket("step must be positive"));
        }
        Self::new(alloc::vec![-step, 0, step], base_exposure)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ev_deltas.is_empty() {
            return Err(Error::EmptyBracket);
        }
        if !self.ev_deltas.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidBracket("EV offsets must be strictly increasing"));
        }
        if !self.ev_deltas.contains(&0) {
            return Err(Error::InvalidBracket("EV offsets must include the medium frame (0)"));
        }
        if let Some(&ev) = self.ev_deltas.iter().find(|ev| ev.abs() > MAX_EV_DELTA) {
            return Err(Error::EvOutOfRange { ev });
        }
        if self.base_exposure.ev_offset != 0 {
            return Err(Error::InvalidBracket("base exposure must be the medium frame"));
        }
        self.base_exposure.validate()
    }

    /// Three frames, as used for short/medium/long inputs.
    pub fn is_challenge_compatible(&self) -> bool {
        self.ev_deltas.len() == 3
    }

    pub fn medium_index(&self) -> usize {
        self.ev_deltas.iter().position(|&ev| ev == 0).unwrap_or(0)
    }

    /// Per-frame exposure settings, in bracket order.
    pub fn exposures(&self) -> Result<Vec<ExposureSettings>> {
        self.ev_deltas.iter().map(|&ev| self.base_exposure.bracketed(ev)).collect()
    }
}

/// Noise-free measurement `min(Φ·t/g + I0, I_max)` before quantization.
pub fn form_ldr_noiseless(scene: &HdrImage, exp: &ExposureSettings) -> Result<Raster> {
    exp.validate()?;
    let scale = exp.t / exp.g;
    let data = scene
        .data()
        .iter()
        .map(|&phi| (phi as f64 * scale + exp.i0).min(exp.i_max))
        .collect();
    Raster::new(scene.shape(), data)
}

/// Noisy measurement `min(Φ·t/g + I0 + n, I_max)` before quantization.
/// Noise is added ahead of the saturation clip.
pub fn form_ldr(
    scene: &HdrImage,
    exp: &ExposureSettings,
    noise: &NoiseParams,
    key: FrameKey,
) -> Result<Raster> {
    exp.validate()?;
    let n = sample_noise_for(scene, exp, noise, key)?;
    let scale = exp.t / exp.g;
    let data = scene
        .data()
        .iter()
        .zip(n.data())
        .map(|(&phi, &n)| (phi as f64 * scale + exp.i0 + n).min(exp.i_max))
        .collect();
    Raster::new(scene.shape(), data)
}

/// 8-bit code for one value: `round(clamp(v / I_max, 0, 1) · 255)`,
/// with ties rounded up.
#[inline]
pub fn quantize_value(value: f64, i_max: f64) -> u8 {
    let unit = (value / i_max).clamp(0.0, 1.0);
    libm::floor(unit * 255.0 + 0.5) as u8
}

/// Maps a code back to the centre of its quantization bin.
#[inline]
pub fn dequantize(code: u8, exp: &ExposureSettings) -> f64 {
    code as f64 / 255.0 * exp.i_max
}

pub fn quantize_8bit(raster: &Raster, exp: &ExposureSettings) -> Result<LdrImage> {
    exp.validate()?;
    // Raster guarantees finite samples, so NaN cannot reach the clamp.
    let data = raster.data().iter().map(|&v| quantize_value(v, exp.i_max)).collect();
    LdrImage::new(raster.shape(), data, *exp)
}

/// One noisy, clipped, quantized exposure of `scene`.
pub fn synthesize_frame(
    scene: &HdrImage,
    exp: &ExposureSettings,
    noise: &NoiseParams,
    key: FrameKey,
) -> Result<LdrImage> {
    quantize_8bit(&form_ldr(scene, exp, noise, key)?, exp)
}

/// Bracket of a static scene: every frame observes the same radiance.
pub fn synthesize_bracket(
    scene: &HdrImage,
    spec: &BracketSpec,
    noise: &NoiseParams,
) -> Result<Vec<LdrImage>> {
    let frames: Vec<&HdrImage> = spec.ev_deltas.iter().map(|_| scene).collect();
    synthesize_bracket_from(&frames, spec, noise, 0)
}

/// Bracket whose frames come from distinct (e.g. consecutive video) HDR
/// frames, one per EV offset. Frame `f` draws noise from substream
/// `(noise.seed, image_key, f)`.
pub fn synthesize_bracket_from(
    frames: &[&HdrImage],
    spec: &BracketSpec,
    noise: &NoiseParams,
    image_key: u64,
) -> Result<Vec<LdrImage>> {
    spec.validate()?;
    noise.validate()?;
    if frames.len() != spec.ev_deltas.len() {
        return Err(Error::InvalidBracket("one source frame per EV offset is required"));
    }
    let shape = frames[0].shape();
    for f in frames {
        shape.ensure_same(&f.shape())?;
    }
    spec.exposures()?
        .iter()
        .zip(frames)
        .enumerate()
        .map(|(i, (exp, scene))| synthesize_frame(scene, exp, noise, FrameKey::new(image_key, i as u32)))
        .collect()
}
