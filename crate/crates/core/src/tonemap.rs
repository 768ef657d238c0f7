//! μ-law range compression, `T(h) = ln(1 + μh) / ln(1 + μ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Raster;

/// Compression parameter used for PSNR-μ scoring.
pub const CHALLENGE_MU: f64 = 5000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TonemapParams {
    pub mu: f64,
}

impl TonemapParams {
    pub fn new(mu: f64) -> Result<Self> {
        let p = TonemapParams { mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu.is_finite() && self.mu > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter { name: "mu", value: self.mu })
        }
    }
}

impl Default for TonemapParams {
    fn default() -> Self {
        TonemapParams { mu: CHALLENGE_MU }
    }
}

/// Tonemaps a normalized radiance `h ∈ [0, 1]`. Inputs outside that range
/// are rejected rather than clamped.
pub fn mu_law(h: f64, params: &TonemapParams) -> Result<f64> {
    params.validate()?;
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::Domain { value: h, at: None });
    }
    Ok(mu_law_unchecked(h, params.mu))
}

#[inline]
fn mu_law_unchecked(h: f64, mu: f64) -> f64 {
    libm::log1p(mu * h) / libm::log1p(mu)
}

/// Applies [`mu_law`] to every sample. Domain errors carry the offending
/// pixel coordinate.
pub fn apply_tonemap(image: &Raster, params: &TonemapParams) -> Result<Raster> {
    params.validate()?;
    let shape = image.shape();
    let mut out = alloc::vec::Vec::with_capacity(shape.len());
    for (i, &h) in image.data().iter().enumerate() {
        if !(0.0..=1.0).contains(&h) {
            return Err(Error::Domain { value: h, at: Some(shape.coord(i)) });
        }
        out.push(mu_law_unchecked(h, params.mu));
    }
    Raster::new(shape, out)
}
