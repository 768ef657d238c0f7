use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sanity bound on bracket offsets, in stops.
pub const MAX_EV_DELTA: i32 = 8;

/// Returns `2^ev_delta`, the exposure-time multiplier for an EV offset.
pub fn ev_to_time_factor(ev_delta: i32) -> Result<f64> {
    if ev_delta.abs() > MAX_EV_DELTA {
        return Err(Error::EvOutOfRange { ev: ev_delta });
    }
    Ok(libm::ldexp(1.0, ev_delta))
}

/// Parameters of the pixel measurement model `min(Φ·t/g + I0 + n, I_max)`.
///
/// `g` is the number of photo-electrons per output unit, so with the
/// default `i_max = 1` it doubles as the full-well capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExposureSettings {
    /// Exposure time (relative units).
    pub t: f64,
    /// Sensor gain, electrons per output unit.
    pub g: f64,
    /// Constant offset added before clipping.
    pub i0: f64,
    /// Saturation point.
    pub i_max: f64,
    /// Stops relative to the medium frame of a bracket.
    pub ev_offset: i32,
}

impl Default for ExposureSettings {
    fn default() -> Self {
        ExposureSettings { t: 1.0, g: DEFAULT_GAIN, i0: 0.0, i_max: 1.0, ev_offset: 0 }
    }
}

/// Electrons per unit output. With `i_max = 1` this gives a 1000 e⁻ full
/// well, so photon noise at mid-grey is a few 8-bit codes.
pub const DEFAULT_GAIN: f64 = 1000.0;

impl ExposureSettings {
    pub fn new(t: f64, g: f64, i0: f64, i_max: f64) -> Result<Self> {
        let e = ExposureSettings { t, g, i0, i_max, ev_offset: 0 };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, value: v })
            }
        };
        positive("t", self.t)?;
        positive("g", self.g)?;
        positive("i_max", self.i_max)?;
        if !(self.i0.is_finite() && self.i0 >= 0.0 && self.i0 < self.i_max) {
            return Err(Error::InvalidParameter { name: "i0", value: self.i0 });
        }
        if self.ev_offset.abs() > MAX_EV_DELTA {
            return Err(Error::EvOutOfRange { ev: self.ev_offset });
        }
        Ok(())
    }

    /// The settings for a frame `ev_delta` stops away from `self`, which
    /// is taken as the medium frame.
    pub fn bracketed(&self, ev_delta: i32) -> Result<Self> {
        let factor = ev_to_time_factor(ev_delta)?;
        let e = ExposureSettings { t: self.t * factor, ev_offset: ev_delta, ..*self };
        e.validate()?;
        Ok(e)
    }

    /// One 8-bit quantization step in output units.
    pub fn lsb(&self) -> f64 {
        self.i_max / 255.0
    }
}
