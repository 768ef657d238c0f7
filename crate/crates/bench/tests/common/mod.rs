//! Procedural HDR scenes for desk-scale tests.
#![allow(dead_code)]

use std::f32::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use hdr_bench::config::DatasetConfig;
use hdr_bench::io;
use hdrbench_core::rng::{substream, StreamKey};
use hdrbench_core::HdrImage;
use rand::Rng;

/// A lit, textured scene with a shadowed corner and a few small emitters.
/// `frame` pans the content horizontally by two pixels per frame.
pub fn scene(seed: u64, frame: usize, width: usize, height: usize) -> HdrImage {
    let mut rng = substream(seed, StreamKey { image: 0x5ce7e, frame: 0, channel: 0 });
    let fx: f32 = rng.random_range(0.05..0.3);
    let fy: f32 = rng.random_range(0.05..0.3);
    let tint: [f32; 3] = [rng.random_range(0.6..1.0), rng.random_range(0.6..1.0), rng.random_range(0.6..1.0)];
    let lights: Vec<(f32, f32, f32, f32)> = (0..3)
        .map(|_| {
            (
                rng.random_range(0.0..width as f32),
                rng.random_range(0.0..height as f32),
                rng.random_range(1.0..2.5),
                rng.random_range(20.0..150.0),
            )
        })
        .collect();
    let shift = 2.0 * frame as f32;
    HdrImage::from_fn(width, height, 3, |x, y, c| {
        let (u, v) = (x as f32 + shift, y as f32);
        let illum = 0.02 + 0.98 * (u / (width as f32 + 20.0)).clamp(0.0, 1.0).powi(2);
        let albedo = 0.5 + 0.4 * (2.0 * PI * fx * u).sin() * (2.0 * PI * fy * v).cos();
        let shadow = if x < width / 4 && y > height / 2 { 0.02 } else { 1.0 };
        let mut val = illum * albedo * shadow * tint[c];
        for &(lx, ly, r, power) in &lights {
            let d2 = (u - lx).powi(2) + (v - ly).powi(2);
            val += power * (-d2 / (2.0 * r * r)).exp();
        }
        val
    })
    .unwrap()
}

/// Writes `scenes` scene directories with `frames` EXR frames each.
pub fn write_scenes(root: &Path, scenes: usize, frames: usize, width: usize, height: usize) -> PathBuf {
    let src = root.join("scenes");
    for s in 0..scenes {
        let dir = src.join(format!("scene_{s:02}"));
        fs::create_dir_all(&dir).unwrap();
        for f in 0..frames {
            io::exr::write_exr(&dir.join(format!("frame_{f:03}.exr")), &scene(s as u64 + 1, f, width, height)).unwrap();
        }
    }
    src
}

pub fn config(source_dir: &Path, json_tail: &str) -> DatasetConfig {
    let text = format!(
        r#"{{"source_dir": {:?}, "split": {{"held_out": {{"val": 0, "test": 1}}}}{json_tail}}}"#,
        source_dir.to_str().unwrap()
    );
    serde_json::from_str(&text).unwrap()
}

/// Recursively lists files under `root` with their bytes, sorted by path.
pub fn tree(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push((path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}
