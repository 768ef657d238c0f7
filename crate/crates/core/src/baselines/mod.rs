//! Classical reconstructors.
//!
//! * [`no_processing`]: invert the measurement model on the medium frame.
//! * [`merge_bracket`]: inverse-variance fusion of all unsaturated frames.
//! * [`self_ensemble`]: average any reconstructor over the 8 dihedral
//!   transforms of its input.

mod ensemble;
mod merge;

pub use ensemble::{self_ensemble, Dihedral, Transform};
pub use merge::{merge_bracket, merge_weights, MergeWeights, SATURATION_CODE};

use alloc::vec::Vec;

use crate::error::Result;
use crate::exposure::ExposureSettings;
use crate::image::{HdrImage, LdrImage, Raster};
use crate::synthesis::dequantize;

/// Radiance implied by an output value: `(v − I0)·g/t`, floored at zero.
#[inline]
pub fn invert_measurement(value: f64, exp: &ExposureSettings) -> f64 {
    (value - exp.i0).max(0.0) * exp.g / exp.t
}

/// Single-frame baseline: dequantize and invert the unsaturated branch of
/// the measurement model. Saturated pixels keep the clipped inverse.
pub fn no_processing(medium: &LdrImage) -> Result<HdrImage> {
    let exp = medium.exposure();
    exp.validate()?;
    let lut: Vec<f32> = (0..=255u8).map(|c| invert_measurement(dequantize(c, exp), exp) as f32).collect();
    HdrImage::from_shape(medium.shape(), medium.data().iter().map(|&c| lut[c as usize]).collect())
}

/// [`no_processing`] on pre-quantization values.
pub fn no_processing_continuous(values: &Raster, exp: &ExposureSettings) -> Result<HdrImage> {
    exp.validate()?;
    HdrImage::from_shape(
        values.shape(),
        values.data().iter().map(|&v| invert_measurement(v, exp) as f32).collect(),
    )
}
