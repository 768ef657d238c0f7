//! Image file formats: OpenEXR and PFM for linear HDR, PNG for 8-bit LDR.

pub mod exr;
pub mod pfm;
pub mod png;

use std::fs;
use std::path::Path;

use hdrbench_core::HdrImage;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HdrFormat {
    Exr,
    Pfm,
}

impl HdrFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "exr" => Some(HdrFormat::Exr),
            "pfm" => Some(HdrFormat::Pfm),
            _ => None,
        }
    }
}

/// Reads an HDR frame, choosing the decoder from the file extension.
/// Frames with NaN, infinite or negative samples are rejected.
pub fn read_hdr(path: &Path) -> Result<HdrImage> {
    match HdrFormat::from_path(path) {
        Some(HdrFormat::Exr) => exr::read_exr(path),
        Some(HdrFormat::Pfm) => pfm::read_pfm(path),
        None => Err(Error::invalid(path, "expected an .exr or .pfm file")),
    }
}

pub fn write_hdr(path: &Path, image: &HdrImage) -> Result<()> {
    match HdrFormat::from_path(path) {
        Some(HdrFormat::Exr) => exr::write_exr(path, image),
        Some(HdrFormat::Pfm) => pfm::write_pfm(path, image),
        None => Err(Error::invalid(path, "expected an .exr or .pfm file")),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

/// Pretty JSON with a trailing newline; field order follows the struct
/// definitions, so identical values always give identical bytes.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn create_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    Ok(())
}
