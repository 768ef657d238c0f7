//! Portable Float Map: `PF` (RGB) or `Pf` (gray) header, dimensions, a
//! scale whose sign gives the byte order, then rows bottom to top.

use std::fs;
use std::path::Path;

use hdrbench_core::HdrImage;

use crate::error::{Error, Result};

pub fn read_pfm(path: &Path) -> Result<HdrImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes).map_err(|m| match m {
        Decode::Malformed(m) => Error::format(path, m),
        Decode::Invalid(e) => Error::invalid(path, e),
    })
}

pub fn write_pfm(path: &Path, image: &HdrImage) -> Result<()> {
    super::create_parent(path)?;
    fs::write(path, encode(image)).map_err(|e| Error::io(path, e))
}

enum Decode {
    Malformed(String),
    Invalid(hdrbench_core::Error),
}

fn malformed(m: impl Into<String>) -> Decode {
    Decode::Malformed(m.into())
}

fn decode(bytes: &[u8]) -> std::result::Result<HdrImage, Decode> {
    // Three whitespace-terminated header tokens after the magic: the
    // single whitespace byte after the scale ends the header.
    let mut pos = 0;
    let mut token = || -> std::result::Result<&str, Decode> {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(malformed("truncated header"));
        }
        let t = std::str::from_utf8(&bytes[start..pos]).map_err(|_| malformed("non-ASCII header"))?;
        pos += 1;
        Ok(t)
    };
    let channels = match token()? {
        "PF" => 3,
        "Pf" => 1,
        other => return Err(malformed(format!("bad magic {other:?}"))),
    };
    let width: usize = token()?.parse().map_err(|_| malformed("bad width"))?;
    let height: usize = token()?.parse().map_err(|_| malformed("bad height"))?;
    let scale: f32 = token()?.parse().map_err(|_| malformed("bad scale"))?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(malformed("scale must be non-zero"));
    }
    let little = scale < 0.0;
    let factor = scale.abs();

    let n = width * height * channels;
    let body = &bytes[pos.min(bytes.len())..];
    if body.len() < n * 4 {
        return Err(malformed(format!("expected {} bytes of samples, found {}", n * 4, body.len())));
    }
    let row = width * channels;
    let mut data = vec![0f32; n];
    for (i, chunk) in body[..n * 4].chunks_exact(4).enumerate() {
        let b = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little { f32::from_le_bytes(b) } else { f32::from_be_bytes(b) };
        let (file_row, col) = (i / row, i % row);
        data[(height - 1 - file_row) * row + col] = if factor == 1.0 { v } else { v * factor };
    }
    HdrImage::new(width, height, channels, data).map_err(Decode::Invalid)
}

fn encode(image: &HdrImage) -> Vec<u8> {
    let (w, h, n) = (image.width(), image.height(), image.channels());
    let magic = if n == 3 { "PF" } else { "Pf" };
    let mut out = format!("{magic}\n{w} {h}\n-1.0\n").into_bytes();
    out.reserve(w * h * n * 4);
    let row = w * n;
    for y in (0..h).rev() {
        for v in &image.data()[y * row..(y + 1) * row] {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}
