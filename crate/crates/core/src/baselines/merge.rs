use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exposure::ExposureSettings;
use crate::image::{HdrImage, LdrImage, Shape};
use crate::noise::NoiseParams;
use crate::synthesis::dequantize;

use super::invert_measurement;

/// Codes at or above this value are treated as clipped. One code below the
/// rail, so noise dithering around `I_max` cannot leak clipped values in.
pub const SATURATION_CODE: u8 = 254;

/// Per-sample, per-frame fusion weights. Each sample's weights are either
/// all zero (every frame clipped) or sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeWeights {
    shape: Shape,
    frames: usize,
    data: Vec<f32>,
}

impl MergeWeights {
    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    /// Weight of `frame` for the sample at flat index `sample`.
    pub fn weight(&self, sample: usize, frame: usize) -> f32 {
        self.data[sample * self.frames + frame]
    }

    pub fn sample_weights(&self, sample: usize) -> &[f32] {
        &self.data[sample * self.frames..(sample + 1) * self.frames]
    }
}

/// Radiance-domain variance of a single frame's inverse for radiance `phi`:
/// the measurement variance scaled by `(g/t)²`, plus uniform quantization
/// noise of one LSB.
fn radiance_variance(phi: f64, exp: &ExposureSettings, noise: &NoiseParams) -> f64 {
    let lsb = exp.lsb();
    let k = exp.g / exp.t;
    k * k * (noise.variance(phi, exp) + lsb * lsb / 12.0)
}

fn check_frames(frames: &[LdrImage]) -> Result<Shape> {
    let first = frames.first().ok_or(Error::EmptyBracket)?;
    let shape = first.shape();
    for f in frames {
        shape.ensure_same(&f.shape())?;
        f.exposure().validate()?;
    }
    Ok(shape)
}

/// Fuses one sample. `inverses[f]` is `None` for clipped frames.
/// Returns the estimate and fills `weights`.
fn fuse_sample(
    inverses: &[Option<f64>],
    exposures: &[ExposureSettings],
    noise: &NoiseParams,
    weights: &mut [f64],
) -> Option<f64> {
    let weighted = |phi_of: &dyn Fn(f64) -> f64, weights: &mut [f64]| {
        let mut total = 0.0;
        for (f, inv) in inverses.iter().enumerate() {
            weights[f] = match inv {
                Some(v) => 1.0 / radiance_variance(phi_of(*v), &exposures[f], noise),
                None => 0.0,
            };
            total += weights[f];
        }
        if total <= 0.0 {
            return None;
        }
        let mut acc = 0.0;
        for (f, inv) in inverses.iter().enumerate() {
            weights[f] /= total;
            if let Some(v) = inv {
                acc += weights[f] * v;
            }
        }
        Some(acc)
    };
    // Plug-in pass: each frame's variance from its own observation.
    let first = weighted(&|v| v, weights)?;
    // One refinement with the shared estimate, then weights are frozen.
    weighted(&|_| first, weights)
}

fn merge_impl(frames: &[LdrImage], noise: &NoiseParams) -> Result<(HdrImage, MergeWeights)> {
    let shape = check_frames(frames)?;
    noise.validate()?;
    let n = frames.len();
    let exposures: Vec<ExposureSettings> = frames.iter().map(|f| *f.exposure()).collect();
    let luts: Vec<Vec<f64>> = exposures
        .iter()
        .map(|e| (0..=255u8).map(|c| invert_measurement(dequantize(c, e), e)).collect())
        .collect();
    // All-clipped samples fall back to the largest clipped inverse (the
    // tightest lower bound on the radiance).
    let fallback = |i: usize| {
        frames
            .iter()
            .zip(&luts)
            .map(|(f, lut)| lut[f.data()[i] as usize])
            .fold(0.0f64, f64::max)
    };

    let mut out = Vec::with_capacity(shape.len());
    let mut weights = vec![0f32; shape.len() * n];
    let mut inverses = vec![None; n];
    let mut w = vec![0f64; n];
    for i in 0..shape.len() {
        for f in 0..n {
            let code = frames[f].data()[i];
            inverses[f] = (code < SATURATION_CODE).then(|| luts[f][code as usize]);
        }
        let phi = match fuse_sample(&inverses, &exposures, noise, &mut w) {
            Some(phi) => {
                for f in 0..n {
                    weights[i * n + f] = w[f] as f32;
                }
                phi
            }
            None => fallback(i),
        };
        out.push(phi as f32);
    }
    Ok((HdrImage::from_shape(shape, out)?, MergeWeights { shape, frames: n, data: weights }))
}

/// Inverse-variance fusion of a static bracket. Clipped frames get zero
/// weight; samples clipped in every frame take the largest clipped inverse.
/// `noise` describes the sensor that produced the frames.
pub fn merge_bracket(frames: &[LdrImage], noise: &NoiseParams) -> Result<HdrImage> {
    Ok(merge_impl(frames, noise)?.0)
}

pub fn merge_weights(frames: &[LdrImage], noise: &NoiseParams) -> Result<MergeWeights> {
    Ok(merge_impl(frames, noise)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::moments;
    use crate::synthesis::{synthesize_bracket, synthesize_bracket_from, BracketSpec};

    fn unit_exposure() -> ExposureSettings {
        ExposureSettings::new(1.0, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn noiseless_frames_agree_with_scene() {
        let e = unit_exposure();
        let scene = HdrImage::from_fn(16, 16, 1, |x, y, _| 0.01 + (x + 16 * y) as f32 * 0.0008).unwrap();
        let spec = BracketSpec::new(vec![0, 1], e).unwrap();
        let frames = synthesize_bracket(&scene, &spec, &NoiseParams::disabled()).unwrap();
        let merged = merge_bracket(&frames, &NoiseParams::disabled()).unwrap();
        // The coarsest frame bounds the error: half an LSB at t = 1.
        let bound = 0.5 / 255.0;
        for (phi, est) in scene.data().iter().zip(merged.data()) {
            assert!(((phi - est).abs() as f64) <= bound + 1e-7);
        }
    }

    #[test]
    fn clipped_long_frame_gets_zero_weight() {
        let e = unit_exposure();
        let scene = HdrImage::filled(1, 1, 1, 0.6).unwrap();
        let spec = BracketSpec::symmetric(2, e).unwrap();
        let noise = NoiseParams::disabled();
        let frames = synthesize_bracket(&scene, &spec, &noise).unwrap();
        assert_eq!(frames[2].data()[0], 255);
        let w = merge_weights(&frames, &noise).unwrap();
        assert_eq!(w.weight(0, 2), 0.0);
        let sum: f32 = w.sample_weights(0).iter().sum();
        assert!((sum - 1.0).abs() < 1e-6);
        let merged = merge_bracket(&frames, &noise).unwrap().data()[0] as f64;
        let short = invert_measurement(dequantize(frames[0].data()[0], frames[0].exposure()), frames[0].exposure());
        let medium = invert_measurement(dequantize(frames[1].data()[0], frames[1].exposure()), frames[1].exposure());
        assert!(merged >= short.min(medium) - 1e-6 && merged <= short.max(medium) + 1e-6);
    }

    #[test]
    fn fully_clipped_takes_shortest_inverse() {
        let e = unit_exposure();
        let scene = HdrImage::filled(2, 2, 1, 50.0).unwrap();
        let spec = BracketSpec::symmetric(2, e).unwrap();
        let noise = NoiseParams::disabled();
        let frames = synthesize_bracket(&scene, &spec, &noise).unwrap();
        let merged = merge_bracket(&frames, &noise).unwrap();
        assert!(merged.data().iter().all(|&v| v == 4.0));
        let w = merge_weights(&frames, &noise).unwrap();
        assert!(w.sample_weights(0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_empty_and_mismatched() {
        let noise = NoiseParams::disabled();
        assert_eq!(merge_bracket(&[], &noise), Err(Error::EmptyBracket));
        let e = unit_exposure();
        let a = LdrImage::new(Shape::new(2, 2, 1).unwrap(), vec![0; 4], e).unwrap();
        let b = LdrImage::new(Shape::new(2, 2, 3).unwrap(), vec![0; 12], e).unwrap();
        assert!(matches!(merge_bracket(&[a, b], &noise), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn merged_variance_beats_every_single_frame() {
        // Monte-Carlo over 10⁴ independent noisy brackets of one pixel,
        // laid out as a 100×100 constant scene with independent noise.
        let base = ExposureSettings { t: 1.0, ..ExposureSettings::default() };
        let spec = BracketSpec::symmetric(2, base).unwrap();
        let noise = NoiseParams::default().with_seed(17);
        let scene = HdrImage::filled(100, 100, 1, 120.0).unwrap();
        let frames = synthesize_bracket_from(&[&scene, &scene, &scene], &spec, &noise, 3).unwrap();
        let merged = merge_bracket(&frames, &noise).unwrap();
        let var_of = |img: &HdrImage| {
            let v: Vec<f64> = img.data().iter().map(|&x| x as f64).collect();
            moments(&v).1
        };
        let merged_var = var_of(&merged);
        for f in &frames {
            let single = super::super::no_processing(f).unwrap();
            let clipped = f.data().iter().any(|&c| c >= SATURATION_CODE);
            if !clipped {
                assert!(merged_var <= var_of(&single), "{merged_var} > {}", var_of(&single));
            }
        }
    }
}
