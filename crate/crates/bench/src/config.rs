//! Dataset build configuration (`cfg.json`).

use std::collections::BTreeMap;
use std::path::PathBuf;

use hdrbench_core::{ExposureSettings, NoiseParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    /// Directory holding one sub-directory of HDR frames per scene.
    /// Relative paths resolve against the config file's directory.
    pub source_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub bracket_mode: BracketMode,
    /// Distance between the medium frames of successive examples.
    #[serde(default = "one")]
    pub stride: usize,
    /// EV steps a scene may be assigned; each scene draws one from its
    /// own seeded stream.
    #[serde(default = "default_ev_steps")]
    pub ev_step_choices: Vec<i32>,
    #[serde(default)]
    pub ev_step_overrides: BTreeMap<String, i32>,
    #[serde(default)]
    pub exposure: ExposureConfig,
    /// Sensor noise. `noise.seed` is ignored; the top-level `seed` is used.
    #[serde(default)]
    pub noise: NoiseParams,
    pub split: SplitConfig,
    /// Scene ids, or `scene/frame-file` entries, to leave out.
    #[serde(default)]
    pub exclude: Vec<String>,
    #[serde(default)]
    pub max_examples_per_scene: Option<usize>,
}

fn schema_version() -> u32 {
    CONFIG_SCHEMA_VERSION
}

fn one() -> usize {
    1
}

fn default_ev_steps() -> Vec<i32> {
    vec![2, 3]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketMode {
    /// Short/medium/long come from frames i−1, i, i+1 and carry real motion.
    #[default]
    Motion,
    /// All three exposures come from frame i.
    Static,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExposureConfig {
    #[serde(default = "default_gain")]
    pub gain: f64,
    #[serde(default)]
    pub offset: f64,
    #[serde(default = "unit")]
    pub saturation: f64,
    #[serde(default)]
    pub medium: MediumExposure,
}

fn default_gain() -> f64 {
    hdrbench_core::exposure::DEFAULT_GAIN
}

fn unit() -> f64 {
    1.0
}

impl Default for ExposureConfig {
    fn default() -> Self {
        ExposureConfig { gain: default_gain(), offset: 0.0, saturation: 1.0, medium: MediumExposure::default() }
    }
}

/// How the medium frame's exposure time is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediumExposure {
    /// A fixed exposure time for every example.
    Fixed { t: f64 },
    /// Picks `t` so that the given percentile of the ground-truth frame
    /// lands at `target · saturation` in the medium exposure.
    Auto { percentile: f64, target: f64 },
}

impl Default for MediumExposure {
    fn default() -> Self {
        MediumExposure::Auto { percentile: 0.5, target: 0.18 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitConfig {
    /// Randomly hold out whole scenes for validation and test.
    HeldOut { val: usize, test: usize },
    /// Name every scene's split explicitly.
    Explicit { train: Vec<String>, val: Vec<String>, test: Vec<String> },
}

impl ExposureConfig {
    /// Medium-frame settings for a scene of known reference level.
    pub fn medium_settings(&self, reference: f64) -> Result<ExposureSettings> {
        let t = match self.medium {
            MediumExposure::Fixed { t } => t,
            MediumExposure::Auto { target, .. } => {
                let reference = if reference > 0.0 { reference } else { 1.0 };
                target * self.saturation * self.gain / reference
            }
        };
        Ok(ExposureSettings::new(t, self.gain, self.offset, self.saturation)?)
    }
}

impl DatasetConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {CONFIG_SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if self.ev_step_choices.is_empty() {
            return Err(Error::Config("ev_step_choices is empty".into()));
        }
        for &s in self.ev_step_choices.iter().chain(self.ev_step_overrides.values()) {
            if s <= 0 || s > hdrbench_core::MAX_EV_DELTA {
                return Err(Error::Config(format!("EV step {s} out of range")));
            }
        }
        match self.exposure.medium {
            MediumExposure::Fixed { t } if !(t.is_finite() && t > 0.0) => {
                return Err(Error::Config(format!("fixed exposure time {t} must be positive")));
            }
            MediumExposure::Auto { percentile, target }
                if !(0.0..=1.0).contains(&percentile) || !(target > 0.0 && target <= 1.0) =>
            {
                return Err(Error::Config("auto exposure needs percentile in [0,1] and target in (0,1]".into()));
            }
            _ => {}
        }
        // Exercise the exposure checks with a neutral reference level.
        self.exposure.medium_settings(1.0)?;
        self.noise.validate()?;
        Ok(())
    }

    /// The noise model with the dataset seed applied.
    pub fn effective_noise(&self) -> NoiseParams {
        self.noise.with_seed(self.seed)
    }

    /// SHA-256 over the compact JSON encoding of the config.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}
