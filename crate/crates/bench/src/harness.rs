//! Scene ingestion, scene-level splits and dataset builds.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use hdrbench_core::rng::{derive_seed, fnv1a, substream, StreamKey};
use hdrbench_core::stats::percentile_linear;
use hdrbench_core::synthesis::{synthesize_bracket_from, BracketSpec};
use hdrbench_core::HdrImage;
use rand::Rng;
use rayon::prelude::*;

use crate::config::{BracketMode, DatasetConfig, MediumExposure, SplitConfig};
use crate::error::{Error, Result};
use crate::io::{self, HdrFormat};
use crate::manifest::*;

/// Frame seen by a [`FrameFilter`] during ingestion.
pub struct FrameInfo<'a> {
    pub scene_id: &'a str,
    pub file: &'a str,
    pub image: &'a HdrImage,
}

/// Curation hook: return `false` to drop a frame.
pub type FrameFilter = dyn Fn(&FrameInfo<'_>) -> bool + Sync;

#[derive(Clone, Copy)]
pub struct IngestOptions<'a> {
    pub mode: BracketMode,
    pub stride: usize,
    /// Scene ids or `scene/file` entries to skip.
    pub exclude: &'a [String],
    pub filter: Option<&'a FrameFilter>,
}

impl Default for IngestOptions<'_> {
    fn default() -> Self {
        IngestOptions { mode: BracketMode::Motion, stride: 1, exclude: &[], filter: None }
    }
}

/// Ingests a scene directory with default options (motion brackets, stride 1).
pub fn ingest(scene_dir: &Path) -> Result<SceneManifest> {
    ingest_with(scene_dir, &IngestOptions::default())
}

fn list_frames(dir: &Path) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_file() && HdrFormat::from_path(&path).is_some() {
            if let Some(name) = path.file_name().and_then(|n| n.to_str()) {
                names.push(name.to_string());
            }
        }
    }
    names.sort();
    Ok(names)
}

fn scene_id_of(dir: &Path) -> Result<String> {
    dir.file_name()
        .and_then(|n| n.to_str())
        .map(str::to_string)
        .ok_or_else(|| Error::invalid(dir, "scene directory has no usable name"))
}

/// Reads every frame of a scene, checks finiteness and shape consistency,
/// and assigns bracket triples.
pub fn ingest_with(scene_dir: &Path, opts: &IngestOptions<'_>) -> Result<SceneManifest> {
    let scene_id = scene_id_of(scene_dir)?;
    if opts.stride == 0 {
        return Err(Error::Config("stride must be at least 1".into()));
    }
    let excluded: BTreeSet<&str> = opts.exclude.iter().map(String::as_str).collect();
    let mut frames: Vec<FrameEntry> = Vec::new();
    for name in list_frames(scene_dir)? {
        if excluded.contains(format!("{scene_id}/{name}").as_str()) {
            continue;
        }
        let path = scene_dir.join(&name);
        let image = io::read_hdr(&path)?;
        if let Some(first) = frames.first() {
            let expected = (first.width, first.height, first.channels);
            if (image.width(), image.height(), image.channels()) != expected {
                return Err(Error::invalid(
                    &path,
                    format!("shape {} differs from the scene's {}x{}x{}", image.shape(), expected.0, expected.1, expected.2),
                ));
            }
        }
        if let Some(filter) = opts.filter {
            if !filter(&FrameInfo { scene_id: &scene_id, file: &name, image: &image }) {
                continue;
            }
        }
        frames.push(FrameEntry { file: name, width: image.width(), height: image.height(), channels: image.channels() });
    }
    if frames.is_empty() {
        return Err(Error::invalid(scene_dir, "no usable .exr or .pfm frames"));
    }
    let brackets = bracket_triples(frames.len(), opts.mode, opts.stride);
    Ok(SceneManifest { scene_id, source_dir: scene_dir.to_path_buf(), frames, split: None, brackets })
}

pub fn bracket_triples(frames: usize, mode: BracketMode, stride: usize) -> Vec<BracketTriple> {
    match mode {
        BracketMode::Motion if frames >= 3 => (1..frames - 1)
            .step_by(stride)
            .map(|m| BracketTriple { short: m - 1, medium: m, long: m + 1 })
            .collect(),
        BracketMode::Motion => Vec::new(),
        BracketMode::Static => (0..frames)
            .step_by(stride)
            .map(|m| BracketTriple { short: m, medium: m, long: m })
            .collect(),
    }
}

/// Ingests every scene sub-directory of `source_dir`, sorted by name.
pub fn ingest_all(source_dir: &Path, opts: &IngestOptions<'_>) -> Result<Vec<SceneManifest>> {
    let mut dirs = Vec::new();
    for entry in fs::read_dir(source_dir).map_err(|e| Error::io(source_dir, e))? {
        let path = entry.map_err(|e| Error::io(source_dir, e))?.path();
        if path.is_dir() {
            dirs.push(path);
        }
    }
    dirs.sort();
    let excluded: BTreeSet<&str> = opts.exclude.iter().map(String::as_str).collect();
    dirs.retain(|d| d.file_name().and_then(|n| n.to_str()).is_some_and(|n| !excluded.contains(n)));
    if dirs.is_empty() {
        return Err(Error::invalid(source_dir, "no scene directories"));
    }
    dirs.par_iter().map(|d| ingest_with(d, opts)).collect()
}

/// Assigns whole scenes to splits. Scene ids are sorted first, so the
/// result depends only on the set of ids and the seed.
pub fn partition(scenes: &[SceneManifest], split: &SplitConfig, seed: u64) -> Result<BTreeMap<String, Split>> {
    let ids: BTreeSet<&str> = scenes.iter().map(|s| s.scene_id.as_str()).collect();
    if ids.len() != scenes.len() {
        return Err(Error::Config("duplicate scene ids".into()));
    }
    match split {
        SplitConfig::HeldOut { val, test } => {
            let held = val + test;
            if held == 0 || held >= ids.len() {
                return Err(Error::Config(format!(
                    "cannot hold out {held} of {} scenes and keep a training scene",
                    ids.len()
                )));
            }
            let mut order: Vec<&str> = ids.into_iter().collect();
            let mut rng = substream(seed, StreamKey { image: fnv1a(b"partition"), frame: 0, channel: 0 });
            for i in (1..order.len()).rev() {
                let j = rng.random_range(0..=i);
                order.swap(i, j);
            }
            Ok(order
                .into_iter()
                .enumerate()
                .map(|(i, id)| {
                    let s = if i < *val {
                        Split::Val
                    } else if i < held {
                        Split::Test
                    } else {
                        Split::Train
                    };
                    (id.to_string(), s)
                })
                .collect())
        }
        SplitConfig::Explicit { train, val, test } => {
            let mut out = BTreeMap::new();
            for (list, s) in [(train, Split::Train), (val, Split::Val), (test, Split::Test)] {
                for id in list {
                    if !ids.contains(id.as_str()) {
                        return Err(Error::Config(format!("split lists unknown scene `{id}`")));
                    }
                    if out.insert(id.clone(), s).is_some() {
                        return Err(Error::Config(format!("scene `{id}` is listed in two splits")));
                    }
                }
            }
            if let Some(missing) = ids.iter().find(|id| !out.contains_key(**id)) {
                return Err(Error::Config(format!("scene `{missing}` has no split")));
            }
            Ok(out)
        }
    }
}

/// EV step for a scene: an explicit override, or a seeded draw from the
/// configured choices.
pub fn scene_ev_step(config: &DatasetConfig, scene_id: &str) -> i32 {
    if let Some(&s) = config.ev_step_overrides.get(scene_id) {
        return s;
    }
    let mut rng = substream(config.seed, StreamKey { image: fnv1a(scene_id.as_bytes()), frame: u32::MAX, channel: 0 });
    config.ev_step_choices[rng.random_range(0..config.ev_step_choices.len())]
}

/// Noise stream key for one example.
pub fn example_image_key(scene_id: &str, index: usize) -> u64 {
    derive_seed(fnv1a(scene_id.as_bytes()), index as u64)
}

pub fn example_id(scene_id: &str, index: usize) -> String {
    format!("{scene_id}/example_{index:04}")
}

struct Job<'a> {
    scene: &'a SceneManifest,
    index: usize,
    triple: BracketTriple,
    split: Split,
    ev_step: i32,
}

fn build_example(job: &Job<'_>, config: &DatasetConfig, hash: &str, root: &Path) -> Result<ExampleEntry> {
    let scene = job.scene;
    let id = example_id(&scene.scene_id, job.index);
    let dir = root.join(&id);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;

    let mut cache: BTreeMap<usize, HdrImage> = BTreeMap::new();
    for i in job.triple.indices() {
        if let std::collections::btree_map::Entry::Vacant(slot) = cache.entry(i) {
            slot.insert(io::read_hdr(&scene.source_dir.join(&scene.frames[i].file))?);
        }
    }
    let gt = &cache[&job.triple.medium];
    let reference = match config.exposure.medium {
        MediumExposure::Auto { percentile, .. } => {
            percentile_linear(gt.data().iter().map(|&v| v as f64), percentile).unwrap_or(0.0)
        }
        MediumExposure::Fixed { .. } => 1.0,
    };
    let reference = if reference > 0.0 { reference } else { gt.max() as f64 };
    let base = config.exposure.medium_settings(reference)?;
    let spec = BracketSpec::symmetric(job.ev_step, base)?;
    let noise = config.effective_noise();
    let image_key = example_image_key(&scene.scene_id, job.index);
    let sources: Vec<&HdrImage> = job.triple.indices().iter().map(|i| &cache[i]).collect();
    let ldrs = synthesize_bracket_from(&sources, &spec, &noise, image_key)?;

    let mut frames = Vec::with_capacity(3);
    for (f, (ldr, src)) in ldrs.iter().zip(job.triple.indices()).enumerate() {
        let file = format!("{}.png", FRAME_ROLES[f]);
        io::png::write_ldr_png(&dir.join(&file), ldr)?;
        frames.push(SidecarFrame {
            role: FRAME_ROLES[f].to_string(),
            file,
            source_frame: scene.frames[src].file.clone(),
            source_index: src,
            ev_delta: spec.ev_deltas[f],
            exposure: *ldr.exposure(),
            frame_index: f as u32,
        });
    }
    io::exr::write_exr(&dir.join(GT_FILE), gt)?;
    let sidecar = Sidecar {
        schema_version: SIDECAR_SCHEMA_VERSION,
        config_hash: hash.to_string(),
        scene_id: scene.scene_id.clone(),
        example_index: job.index,
        split: job.split,
        transfer: io::png::TRANSFER_LINEAR.to_string(),
        ev_step: job.ev_step,
        ev_deltas: spec.ev_deltas.clone(),
        image_key,
        noise,
        frames,
        medium_index: spec.medium_index(),
        gt: SidecarGt {
            file: GT_FILE.to_string(),
            source_frame: scene.frames[job.triple.medium].file.clone(),
            source_index: job.triple.medium,
        },
    };
    debug_assert!(sidecar.gt_is_aligned());
    io::write_json(&dir.join(SIDECAR_FILE), &sidecar)?;
    Ok(ExampleEntry { id, scene_id: scene.scene_id.clone(), index: job.index, split: job.split })
}

fn staging_dir(out: &Path) -> PathBuf {
    let name = out.file_name().and_then(|n| n.to_str()).unwrap_or("dataset");
    out.with_file_name(format!(".{name}.partial"))
}

/// Synthesizes every bracket of every scene into `out`.
///
/// Output is written to a sibling staging directory and renamed into place
/// only when every example succeeded; on failure the staging directory is
/// removed. `out` must not exist or be empty.
pub fn build(scenes: &[SceneManifest], config: &DatasetConfig, out: &Path) -> Result<DatasetManifest> {
    config.validate()?;
    if out.exists() {
        let non_empty = fs::read_dir(out).map_err(|e| Error::io(out, e))?.next().is_some();
        if non_empty {
            return Err(Error::invalid(out, "output directory exists and is not empty"));
        }
    }
    let splits = partition(scenes, &config.split, config.seed)?;
    let hash = config.hash();

    let mut scenes: Vec<SceneManifest> = scenes.to_vec();
    scenes.sort_by(|a, b| a.scene_id.cmp(&b.scene_id));
    for s in &mut scenes {
        s.split = Some(splits[&s.scene_id]);
        if let Some(max) = config.max_examples_per_scene {
            s.brackets.truncate(max);
        }
    }
    let jobs: Vec<Job<'_>> = scenes
        .iter()
        .flat_map(|s| {
            let ev_step = scene_ev_step(config, &s.scene_id);
            s.brackets.iter().enumerate().map(move |(index, &triple)| Job {
                scene: s,
                index,
                triple,
                split: s.split.unwrap_or(Split::Train),
                ev_step,
            })
        })
        .collect();
    if jobs.is_empty() {
        return Err(Error::Config("no bracket triples; scenes need at least 3 frames in motion mode".into()));
    }

    let staging = staging_dir(out);
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
    }
    fs::create_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
    let result = (|| {
        let examples: Vec<ExampleEntry> =
            jobs.par_iter().map(|j| build_example(j, config, &hash, &staging)).collect::<Result<_>>()?;
        let manifest = DatasetManifest {
            schema_version: MANIFEST_SCHEMA_VERSION,
            config_hash: hash.clone(),
            config: config.clone(),
            scenes: scenes.clone(),
            examples,
        };
        io::write_json(&staging.join(MANIFEST_FILE), &manifest)?;
        if out.exists() {
            fs::remove_dir(out).map_err(|e| Error::io(out, e))?;
        }
        fs::rename(&staging, out).map_err(|e| Error::io(out, e))?;
        Ok(manifest)
    })();
    if result.is_err() {
        let _ = fs::remove_dir_all(&staging);
    }
    result
}

/// Resolves the config's source directory, ingests and builds.
pub fn build_from_config(config: &DatasetConfig, config_dir: &Path, out: &Path) -> Result<DatasetManifest> {
    build_from_config_with(config, config_dir, out, None)
}

pub fn build_from_config_with(
    config: &DatasetConfig,
    config_dir: &Path,
    out: &Path,
    filter: Option<&FrameFilter>,
) -> Result<DatasetManifest> {
    config.validate()?;
    let source = if config.source_dir.is_absolute() {
        config.source_dir.clone()
    } else {
        config_dir.join(&config.source_dir)
    };
    let opts = IngestOptions { mode: config.bracket_mode, stride: config.stride, exclude: &config.exclude, filter };
    let scenes = ingest_all(&source, &opts)?;
    build(&scenes, config, out)
}

pub fn load_manifest(dataset: &Path) -> Result<DatasetManifest> {
    let m: DatasetManifest = io::read_json(&dataset.join(MANIFEST_FILE))?;
    if m.schema_version != MANIFEST_SCHEMA_VERSION {
        return Err(Error::invalid(dataset.join(MANIFEST_FILE), format!("unsupported schema_version {}", m.schema_version)));
    }
    Ok(m)
}

pub fn load_sidecar(dataset: &Path, example: &ExampleEntry) -> Result<Sidecar> {
    let path = dataset.join(&example.id).join(SIDECAR_FILE);
    let s: Sidecar = io::read_json(&path)?;
    if s.schema_version != SIDECAR_SCHEMA_VERSION {
        return Err(Error::invalid(&path, format!("unsupported schema_version {}", s.schema_version)));
    }
    if !s.gt_is_aligned() {
        return Err(Error::invalid(&path, "ground truth is not the medium frame's HDR"));
    }
    Ok(s)
}
