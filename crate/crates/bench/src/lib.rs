//! Dataset builder, file formats and scoring harness for HDR
//! reconstruction benchmarks, built on [`hdrbench_core`].
//!
//! Layout of a built dataset:
//!
//! ```text
//! out/
//!   manifest.json
//!   <scene>/example_NNNN/{short.png, medium.png, long.png, gt.exr, meta.json}
//! ```

pub mod config;
pub mod error;
pub mod harness;
pub mod io;
pub mod manifest;
pub mod report;
pub mod track;

pub use config::DatasetConfig;
pub use error::{Error, Result};
pub use track::{run_track, Method, ScoreRecord, SplitFilter, Track};
