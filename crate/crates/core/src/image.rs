//! Raster containers.
//!
//! All rasters are row-major and channel-interleaved: the sample for
//! `(x, y, c)` lives at `(y * width + x) * channels + c`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exposure::ExposureSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
}

impl Shape {
    /// Only 1- and 3-channel rasters are supported.
    pub fn new(width: usize, height: usize, channels: usize) -> Result<Self> {
        if width == 0 || height == 0 || !(channels == 1 || channels == 3) {
            return Err(Error::InvalidShape { width, height, channels });
        }
        Ok(Shape { width, height, channels })
    }

    pub fn len(&self) -> usize {
        self.width * self.height * self.channels
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        (y * self.width + x) * self.channels + c
    }

    pub fn coord(&self, index: usize) -> PixelCoord {
        let c = index % self.channels;
        let p = index / self.channels;
        PixelCoord { x: p % self.width, y: p / self.width, c }
    }

    /// Shape with width and height exchanged.
    pub fn transposed(&self) -> Shape {
        Shape { width: self.height, height: self.width, channels: self.channels }
    }

    pub fn ensure_same(&self, other: &Shape) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch { left: *self, right: *other })
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.width, self.height, self.channels)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PixelCoord {
    pub x: usize,
    pub y: usize,
    pub c: usize,
}

impl fmt::Display for PixelCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x={}, y={}, c={})", self.x, self.y, self.c)
    }
}

fn check_len(shape: &Shape, len: usize) -> Result<()> {
    if shape.len() != len {
        return Err(Error::DataLength { expected: shape.len(), actual: len });
    }
    Ok(())
}

/// Linear scene radiance. Every sample is finite and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct HdrImage {
    shape: Shape,
    data: Vec<f32>,
}

impl HdrImage {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        Self::from_shape(Shape::new(width, height, channels)?, data)
    }

    pub fn from_shape(shape: Shape, data: Vec<f32>) -> Result<Self> {
        check_len(&shape, data.len())?;
        if let Some(i) = data.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidPixel { value: data[i] as f64, at: shape.coord(i) });
        }
        Ok(HdrImage { shape, data })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f32) -> Result<Self> {
        let shape = Shape::new(width, height, channels)?;
        Self::from_shape(shape, vec![value; shape.len()])
    }

    /// Builds an image by evaluating `f(x, y, c)` for every sample.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f32,
    ) -> Result<Self> {
        let shape = Shape::new(width, height, channels)?;
        let mut data = Vec::with_capacity(shape.len());
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c));
                }
            }
        }
        Self::from_shape(shape, data)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn width(&self) -> usize {
        self.shape.width
    }

    pub fn height(&self) -> usize {
        self.shape.height
    }

    pub fn channels(&self) -> usize {
        self.shape.channels
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f32 {
        self.data[self.shape.index(x, y, c)]
    }

    pub fn max(&self) -> f32 {
        self.data.iter().copied().fold(0.0, f32::max)
    }

    /// Multiplies every sample by `factor` (which must be finite and ≥ 0).
    pub fn scaled(&self, factor: f32) -> Result<Self> {
        Self::from_shape(self.shape, self.data.iter().map(|v| v * factor).collect())
    }
}

/// An 8-bit observation together with the exposure that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct LdrImage {
    shape: Shape,
    data: Vec<u8>,
    exposure: ExposureSettings,
}

impl LdrImage {
    pub fn new(shape: Shape, data: Vec<u8>, exposure: ExposureSettings) -> Result<Self> {
        check_len(&shape, data.len())?;
        exposure.validate()?;
        Ok(LdrImage { shape, data, exposure })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn exposure(&self) -> &ExposureSettings {
        &self.exposure
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> u8 {
        self.data[self.shape.index(x, y, c)]
    }
}

/// Double-precision working raster used between pipeline stages
/// (pre-quantization LDR values, normalized HDR, noise fields).
/// Samples are finite but otherwise unconstrained.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    shape: Shape,
    data: Vec<f64>,
}

impl Raster {
    pub fn new(shape: Shape, data: Vec<f64>) -> Result<Self> {
        check_len(&shape, data.len())?;
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidPixel { value: data[i], at: shape.coord(i) });
        }
        Ok(Raster { shape, data })
    }

    pub fn filled(shape: Shape, value: f64) -> Result<Self> {
        Self::new(shape, vec![value; shape.len()])
    }

    pub fn from_hdr(image: &HdrImage) -> Self {
        Raster {
            shape: image.shape,
            data: image.data.iter().map(|&v| v as f64).collect(),
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[self.shape.index(x, y, c)]
    }

    /// Narrows to an [`HdrImage`]; fails on negative samples.
    pub fn to_hdr(&self) -> Result<HdrImage> {
        HdrImage::from_shape(self.shape, self.data.iter().map(|&v| v as f32).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_and_coord_agree() {
        let s = Shape::new(4, 3, 3).unwrap();
        for i in 0..s.len() {
            let p = s.coord(i);
            assert_eq!(s.index(p.x, p.y, p.c), i);
        }
    }

    #[test]
    fn rejects_bad_channel_counts() {
        assert!(Shape::new(2, 2, 2).is_err());
        assert!(Shape::new(0, 2, 1).is_err());
        assert!(Shape::new(2, 2, 4).is_err());
    }

    #[test]
    fn hdr_rejects_negative_and_nan() {
        let err = HdrImage::new(2, 1, 1, vec![0.5, -1.0]).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidPixel { value: -1.0, at: PixelCoord { x: 1, y: 0, c: 0 } }
        );
        assert!(HdrImage::new(1, 1, 1, vec![f32::NAN]).is_err());
        assert!(HdrImage::new(1, 1, 1, vec![f32::INFINITY]).is_err());
    }

    #[test]
    fn length_must_match_shape() {
        assert_eq!(
            HdrImage::new(2, 2, 3, vec![0.0; 11]).unwrap_err(),
            Error::DataLength { expected: 12, actual: 11 }
        );
    }
}
