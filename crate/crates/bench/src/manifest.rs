//! On-disk records: scene manifests, the dataset manifest and per-example
//! sidecars. All carry a schema version.

use std::path::PathBuf;

use hdrbench_core::{ExposureSettings, NoiseParams};
use serde::{Deserialize, Serialize};

use crate::config::DatasetConfig;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const SIDECAR_SCHEMA_VERSION: u32 = 1;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const SIDECAR_FILE: &str = "meta.json";
pub const GT_FILE: &str = "gt.exr";
pub const FRAME_ROLES: [&str; 3] = ["short", "medium", "long"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameEntry {
    pub file: String,
    pub width: usize,
    pub height: usize,
    pub channels: usize,
}

/// Source-frame indices for one example's short, medium and long exposures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketTriple {
    pub short: usize,
    pub medium: usize,
    pub long: usize,
}

impl BracketTriple {
    pub fn indices(&self) -> [usize; 3] {
        [self.short, self.medium, self.long]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneManifest {
    pub scene_id: String,
    /// Where the frames were read from; not persisted.
    #[serde(skip)]
    pub source_dir: PathBuf,
    pub frames: Vec<FrameEntry>,
    pub split: Option<Split>,
    pub brackets: Vec<BracketTriple>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleEntry {
    /// `scene_id/example_NNNN`, also the example's directory relative to
    /// the dataset root.
    pub id: String,
    pub scene_id: String,
    pub index: usize,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: u32,
    pub config_hash: String,
    pub config: DatasetConfig,
    pub scenes: Vec<SceneManifest>,
    pub examples: Vec<ExampleEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidecarFrame {
    pub role: String,
    pub file: String,
    pub source_frame: String,
    pub source_index: usize,
    pub ev_delta: i32,
    pub exposure: ExposureSettings,
    /// Noise substream: `(noise.seed, image_key, frame_index)`.
    pub frame_index: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidecarGt {
    pub file: String,
    pub source_frame: String,
    pub source_index: usize,
}

/// Everything needed to regenerate an example's LDR frames bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub schema_version: u32,
    pub config_hash: String,
    pub scene_id: String,
    pub example_index: usize,
    pub split: Split,
    /// LDR codes are linear in exposure (no camera response curve).
    pub transfer: String,
    pub ev_step: i32,
    pub ev_deltas: Vec<i32>,
    pub image_key: u64,
    pub noise: NoiseParams,
    pub frames: Vec<SidecarFrame>,
    pub medium_index: usize,
    pub gt: SidecarGt,
}

impl Sidecar {
    /// The ground truth is the HDR of the frame under the medium exposure.
    pub fn gt_is_aligned(&self) -> bool {
        self.frames
            .get(self.medium_index)
            .is_some_and(|m| m.ev_delta == 0 && m.source_index == self.gt.source_index && m.source_frame == self.gt.source_frame)
    }
}
