//! 8-bit PNG for synthesized LDR frames.
//!
//! Codes are stored as-is (no transfer curve), and every file carries a
//! `tEXt` chunk `transfer=linear` so viewers and loaders cannot mistake
//! them for sRGB-encoded images.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use hdrbench_core::{ExposureSettings, LdrImage, Shape};

use crate::error::{Error, Result};

pub const TRANSFER_KEY: &str = "transfer";
pub const TRANSFER_LINEAR: &str = "linear";

pub fn write_ldr_png(path: &Path, image: &LdrImage) -> Result<()> {
    super::create_parent(path)?;
    let shape = image.shape();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut enc = png::Encoder::new(BufWriter::new(file), shape.width as u32, shape.height as u32);
    enc.set_color(if shape.channels == 3 { png::ColorType::Rgb } else { png::ColorType::Grayscale });
    enc.set_depth(png::BitDepth::Eight);
    enc.add_text_chunk(TRANSFER_KEY.to_string(), TRANSFER_LINEAR.to_string())
        .map_err(|e| Error::format(path, e))?;
    let mut writer = enc.write_header().map_err(|e| png_error(path, e))?;
    writer.write_image_data(image.data()).map_err(|e| png_error(path, e))?;
    writer.finish().map_err(|e| png_error(path, e))
}

fn png_error(path: &Path, e: png::EncodingError) -> Error {
    match e {
        png::EncodingError::IoError(io) => Error::io(path, io),
        other => Error::format(path, other),
    }
}

/// Loads codes and attaches the exposure recorded in the bracket sidecar.
pub fn read_ldr_png(path: &Path, exposure: ExposureSettings) -> Result<LdrImage> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let decoder = png::Decoder::new(BufReader::new(file));
    let mut reader = decoder.read_info().map_err(|e| Error::format(path, e))?;
    let linear = reader
        .info()
        .uncompressed_latin1_text
        .iter()
        .any(|t| t.keyword == TRANSFER_KEY && t.text == TRANSFER_LINEAR);
    if !linear {
        return Err(Error::invalid(path, "missing transfer=linear marker"));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::format(path, "image too large"))?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf).map_err(|e| Error::format(path, e))?;
    let channels = match (info.color_type, info.bit_depth) {
        (png::ColorType::Rgb, png::BitDepth::Eight) => 3,
        (png::ColorType::Grayscale, png::BitDepth::Eight) => 1,
        other => return Err(Error::format(path, format!("unsupported PNG layout {other:?}"))),
    };
    let shape = Shape::new(info.width as usize, info.height as usize, channels)?;
    // Rows are tightly packed for 8-bit gray/RGB.
    buf.truncate(shape.len());
    Ok(LdrImage::new(shape, buf, exposure)?)
}
