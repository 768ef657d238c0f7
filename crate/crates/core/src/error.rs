use core::fmt;

use crate::image::{PixelCoord, Shape};

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar parameter is outside its admissible range.
    InvalidParameter { name: &'static str, value: f64 },
    /// A value handed to the μ-law tonemapper lies outside `[0, 1]`.
    Domain { value: f64, at: Option<PixelCoord> },
    /// Raster data violates an image invariant.
    InvalidPixel { value: f64, at: PixelCoord },
    /// `data.len()` disagrees with the declared shape.
    DataLength { expected: usize, actual: usize },
    InvalidShape { width: usize, height: usize, channels: usize },
    ShapeMismatch { left: Shape, right: Shape },
    EvOutOfRange { ev: i32 },
    InvalidBracket(&'static str),
    /// Normalization constant derived from the ground truth is zero.
    DegenerateReference { mode: &'static str },
    EmptyBracket,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name} = {value}")
            }
            Error::Domain { value, at: Some(at) } => {
                write!(f, "value {value} outside [0, 1] at {at}")
            }
            Error::Domain { value, at: None } => write!(f, "value {value} outside [0, 1]"),
            Error::InvalidPixel { value, at } => {
                write!(f, "pixel {at} has invalid value {value}")
            }
            Error::DataLength { expected, actual } => {
                write!(f, "expected {expected} samples, got {actual}")
            }
            Error::InvalidShape { width, height, channels } => {
                write!(f, "invalid shape {width}x{height}x{channels}")
            }
            Error::ShapeMismatch { left, right } => {
                write!(f, "shape mismatch: {left} vs {right}")
            }
            Error::EvOutOfRange { ev } => write!(
                f,
                "EV delta {ev} outside [-{0}, {0}]",
                crate::exposure::MAX_EV_DELTA
            ),
            Error::InvalidBracket(why) => write!(f, "invalid bracket: {why}"),
            Error::DegenerateReference { mode } => {
                write!(f, "ground truth gives a zero {mode} normalization constant")
            }
            Error::EmptyBracket => f.write_str("bracket contains no frames"),
        }
    }
}

impl core::error::Error for Error {}
