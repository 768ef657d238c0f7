//! Running reconstruction methods over a built dataset and scoring them.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use hdrbench_core::baselines::{merge_bracket, no_processing, self_ensemble};
use hdrbench_core::metrics::score_detailed;
use hdrbench_core::stats::mean;
use hdrbench_core::{HdrImage, LdrImage, NoiseParams, TonemapParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{load_manifest, load_sidecar};
use crate::io;
use crate::manifest::{DatasetManifest, ExampleEntry, Split, GT_FILE};
use crate::report::LeaderboardRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Track {
    /// Only the medium exposure is visible to the method.
    Single,
    /// The full short/medium/long bracket.
    Multi,
}

impl FromStr for Track {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Track::Single),
            "multi" => Ok(Track::Multi),
            other => Err(Error::Config(format!("unknown track `{other}` (single|multi)"))),
        }
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Track::Single => "single",
            Track::Multi => "multi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    NoProcessing,
    Merge,
    MergeEnsemble,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::NoProcessing, Method::Merge, Method::MergeEnsemble];

    pub fn name(self) -> &'static str {
        match self {
            Method::NoProcessing => "no-processing",
            Method::Merge => "merge",
            Method::MergeEnsemble => "merge+ensemble",
        }
    }

    pub fn ensemble(self) -> &'static str {
        match self {
            Method::MergeEnsemble => "flips, transpose",
            _ => "-",
        }
    }

    /// Reconstructs an HDR estimate. `frames` is either the medium frame
    /// alone or a full bracket; `noise` describes the sensor.
    pub fn reconstruct(self, frames: &[LdrImage], noise: &NoiseParams) -> Result<HdrImage> {
        match self {
            Method::NoProcessing => {
                let medium = frames
                    .iter()
                    .find(|f| f.exposure().ev_offset == 0)
                    .ok_or(hdrbench_core::Error::EmptyBracket)?;
                Ok(no_processing(medium)?)
            }
            Method::Merge => Ok(merge_bracket(frames, noise)?),
            Method::MergeEnsemble => Ok(self_ensemble(&frames.to_vec(), |f: &Vec<LdrImage>| merge_bracket(f, noise))?),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::UnknownMethod {
            name: s.to_string(),
            available: Method::ALL.map(Method::name).join(", "),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitFilter {
    All,
    Only(Split),
}

impl FromStr for SplitFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SplitFilter::All),
            "train" => Ok(SplitFilter::Only(Split::Train)),
            "val" => Ok(SplitFilter::Only(Split::Val)),
            "test" => Ok(SplitFilter::Only(Split::Test)),
            other => Err(Error::Config(format!("unknown split `{other}` (all|train|val|test)"))),
        }
    }
}

impl SplitFilter {
    pub fn select(self, manifest: &DatasetManifest) -> Vec<ExampleEntry> {
        manifest
            .examples
            .iter()
            .filter(|e| match self {
                SplitFilter::All => true,
                SplitFilter::Only(s) => e.split == s,
            })
            .cloned()
            .collect()
    }
}

/// One line of a score report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub image_id: String,
    pub psnr_linear: f64,
    pub psnr_mu: f64,
    pub gt_peak: f64,
    pub gt_p99: f64,
    pub mu: f64,
}

/// What a method may see for one example.
pub struct ExampleInputs {
    pub id: String,
    pub frames: Vec<LdrImage>,
    pub gt: HdrImage,
    pub noise: NoiseParams,
}

pub fn load_example(dataset: &Path, entry: &ExampleEntry, track: Track) -> Result<ExampleInputs> {
    let sidecar = load_sidecar(dataset, entry)?;
    let dir = dataset.join(&entry.id);
    let visible: Vec<_> = match track {
        Track::Single => vec![&sidecar.frames[sidecar.medium_index]],
        Track::Multi => sidecar.frames.iter().collect(),
    };
    let frames = visible
        .into_iter()
        .map(|f| io::png::read_ldr_png(&dir.join(&f.file), f.exposure))
        .collect::<Result<Vec<_>>>()?;
    let gt = io::read_hdr(&dir.join(&sidecar.gt.file))?;
    Ok(ExampleInputs { id: entry.id.clone(), frames, gt, noise: sidecar.noise })
}

pub fn score_pair(image_id: &str, estimate: &HdrImage, gt: &HdrImage, params: &TonemapParams) -> Result<ScoreRecord> {
    let d = score_detailed(estimate, gt, params).map_err(|e| Error::from(e).for_image(image_id))?;
    Ok(ScoreRecord {
        image_id: image_id.to_string(),
        psnr_linear: d.scores.psnr_linear,
        psnr_mu: d.scores.psnr_mu,
        gt_peak: d.gt_peak,
        gt_p99: d.gt_p99,
        mu: d.mu,
    })
}

pub struct TrackRun {
    pub records: Vec<ScoreRecord>,
    pub row: LeaderboardRow,
}

fn selected(dataset: &Path, filter: SplitFilter) -> Result<Vec<ExampleEntry>> {
    let manifest = load_manifest(dataset)?;
    let examples = filter.select(&manifest);
    if examples.is_empty() {
        return Err(Error::invalid(dataset, "no examples in the selected split"));
    }
    Ok(examples)
}

/// Reconstructs and scores every selected example. Records keep manifest
/// order; means are taken over the per-image records.
pub fn run_track(
    dataset: &Path,
    track: Track,
    method: Method,
    filter: SplitFilter,
    params: &TonemapParams,
) -> Result<TrackRun> {
    let examples = selected(dataset, filter)?;
    let scored: Vec<(ScoreRecord, f64)> = examples
        .par_iter()
        .map(|entry| {
            let inputs = load_example(dataset, entry, track).map_err(|e| e.for_image(&entry.id))?;
            let start = Instant::now();
            let estimate = method.reconstruct(&inputs.frames, &inputs.noise).map_err(|e| e.for_image(&entry.id))?;
            let elapsed = start.elapsed().as_secs_f64();
            Ok((score_pair(&entry.id, &estimate, &inputs.gt, params)?, elapsed))
        })
        .collect::<Result<_>>()?;
    let (records, times): (Vec<ScoreRecord>, Vec<f64>) = scored.into_iter().unzip();
    let row = aggregate(&records, &times, track, method);
    Ok(TrackRun { records, row })
}

pub fn aggregate(records: &[ScoreRecord], times: &[f64], track: Track, method: Method) -> LeaderboardRow {
    let of = |f: fn(&ScoreRecord) -> f64| mean(&records.iter().map(f).collect::<Vec<_>>()).unwrap_or(f64::NAN);
    LeaderboardRow {
        method: method.name().to_string(),
        track: track.to_string(),
        psnr_mu: of(|r| r.psnr_mu),
        psnr_linear: of(|r| r.psnr_linear),
        runtime_s: mean(times).unwrap_or(0.0),
        ensemble: method.ensemble().to_string(),
        images: records.len(),
    }
}

/// Path of the estimate for an example inside an estimates directory.
pub fn estimate_path(estimates: &Path, example_id: &str) -> PathBuf {
    estimates.join(format!("{example_id}.exr"))
}

/// Writes one OpenEXR estimate per selected example. Returns the count.
pub fn reconstruct_dataset(
    dataset: &Path,
    track: Track,
    method: Method,
    filter: SplitFilter,
    out: &Path,
) -> Result<usize> {
    let examples = selected(dataset, filter)?;
    examples.par_iter().try_for_each(|entry| {
        let inputs = load_example(dataset, entry, track).map_err(|e| e.for_image(&entry.id))?;
        let estimate = method.reconstruct(&inputs.frames, &inputs.noise).map_err(|e| e.for_image(&entry.id))?;
        io::exr::write_exr(&estimate_path(out, &entry.id), &estimate)
    })?;
    Ok(examples.len())
}

/// Scores a directory of estimates (as written by [`reconstruct_dataset`])
/// against the dataset's ground truth.
pub fn score_dataset(
    dataset: &Path,
    estimates: &Path,
    filter: SplitFilter,
    params: &TonemapParams,
) -> Result<Vec<ScoreRecord>> {
    let examples = selected(dataset, filter)?;
    examples
        .par_iter()
        .map(|entry| {
            let estimate = io::read_hdr(&estimate_path(estimates, &entry.id)).map_err(|e| e.for_image(&entry.id))?;
            let gt = io::read_hdr(&dataset.join(&entry.id).join(GT_FILE)).map_err(|e| e.for_image(&entry.id))?;
            score_pair(&entry.id, &estimate, &gt, params)
        })
        .collect()
}

/// JSON lines, one [`ScoreRecord`] per line.
pub fn write_records_jsonl(path: &Path, records: &[ScoreRecord]) -> Result<()> {
    io::create_parent(path)?;
    let mut buf = Vec::new();
    for r in records {
        serde_json::to_writer(&mut buf, r).map_err(|e| Error::json(path, e))?;
        buf.push(b'\n');
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&buf).map_err(|e| Error::io(path, e))
}

pub fn read_records_jsonl(path: &Path) -> Result<Vec<ScoreRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::json(path, e)))
        .collect()
}
