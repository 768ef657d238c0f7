mod common;

use std::fs;
use std::path::Path;

use hdr_bench::config::{BracketMode, SplitConfig};
use hdr_bench::harness::{self, IngestOptions};
use hdr_bench::io;
use hdr_bench::manifest::{SceneManifest, Split};
use hdr_bench::Error;
use hdrbench_core::HdrImage;

fn scene_dir(root: &Path, name: &str, frames: usize) -> std::path::PathBuf {
    let dir = root.join(name);
    fs::create_dir_all(&dir).unwrap();
    for f in 0..frames {
        io::exr::write_exr(&dir.join(format!("f{f:03}.exr")), &common::scene(3, f, 16, 12)).unwrap();
    }
    dir
}

fn named(n: usize) -> Vec<SceneManifest> {
    (0..n)
        .map(|i| SceneManifest {
            scene_id: format!("s{i:02}"),
            source_dir: Default::default(),
            frames: Vec::new(),
            split: None,
            brackets: Vec::new(),
        })
        .collect()
}

#[test]
fn ten_frames_give_eight_motion_triples() {
    let tmp = tempfile::tempdir().unwrap();
    let m = harness::ingest(&scene_dir(tmp.path(), "walk", 10)).unwrap();
    assert_eq!(m.scene_id, "walk");
    assert_eq!(m.frames.len(), 10);
    assert_eq!(m.brackets.len(), 8);
    assert_eq!(m.brackets[0].indices(), [0, 1, 2]);
    assert_eq!(m.brackets[7].indices(), [7, 8, 9]);
}

#[test]
fn static_mode_and_stride() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = scene_dir(tmp.path(), "still", 7);
    let opts = IngestOptions { mode: BracketMode::Static, stride: 3, ..Default::default() };
    let m = harness::ingest_with(&dir, &opts).unwrap();
    let triples: Vec<_> = m.brackets.iter().map(|b| b.indices()).collect();
    assert_eq!(triples, vec![[0, 0, 0], [3, 3, 3], [6, 6, 6]]);
}

#[test]
fn corrupt_frame_is_named() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = scene_dir(tmp.path(), "broken", 4);
    fs::write(dir.join("f002.exr"), b"not an exr").unwrap();
    let err = harness::ingest(&dir).unwrap_err();
    assert!(err.to_string().contains("f002.exr"), "{err}");
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn non_finite_frame_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = scene_dir(tmp.path(), "nan", 3);
    let mut pfm = b"Pf\n2 1\n-1.0\n".to_vec();
    pfm.extend_from_slice(&1.0f32.to_le_bytes());
    pfm.extend_from_slice(&f32::NAN.to_le_bytes());
    fs::write(dir.join("f100.pfm"), pfm).unwrap();
    let err = harness::ingest(&dir).unwrap_err();
    assert!(err.to_string().contains("f100.pfm"), "{err}");
}

#[test]
fn empty_and_mismatched_scenes_fail() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty");
    fs::create_dir_all(&empty).unwrap();
    assert!(harness::ingest(&empty).is_err());

    let dir = scene_dir(tmp.path(), "mixed", 3);
    io::exr::write_exr(&dir.join("f009.exr"), &HdrImage::filled(8, 8, 3, 1.0).unwrap()).unwrap();
    assert!(matches!(harness::ingest(&dir), Err(Error::InvalidInput { .. })));
}

#[test]
fn exclusions_and_filters() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = scene_dir(tmp.path(), "cut", 6);
    let exclude = vec!["cut/f000.exr".to_string()];
    let filter = |f: &harness::FrameInfo<'_>| f.file != "f005.exr";
    let opts = IngestOptions { exclude: &exclude, filter: Some(&filter), ..Default::default() };
    let m = harness::ingest_with(&dir, &opts).unwrap();
    let files: Vec<_> = m.frames.iter().map(|f| f.file.as_str()).collect();
    assert_eq!(files, ["f001.exr", "f002.exr", "f003.exr", "f004.exr"]);
    assert_eq!(m.brackets.len(), 2);
}

#[test]
fn held_out_partition_sizes() {
    let scenes = named(29);
    let split = SplitConfig::HeldOut { val: 0, test: 4 };
    let p = harness::partition(&scenes, &split, 1).unwrap();
    assert_eq!(p.values().filter(|s| **s == Split::Train).count(), 25);
    assert_eq!(p.values().filter(|s| **s == Split::Test).count(), 4);
    assert_eq!(p, harness::partition(&scenes, &split, 1).unwrap());

    let two = harness::partition(&named(2), &SplitConfig::HeldOut { val: 0, test: 1 }, 9).unwrap();
    assert_eq!(two.values().filter(|s| **s == Split::Train).count(), 1);
    assert_eq!(two, harness::partition(&named(2), &SplitConfig::HeldOut { val: 0, test: 1 }, 9).unwrap());

    assert!(harness::partition(&named(4), &SplitConfig::HeldOut { val: 0, test: 5 }, 0).is_err());
    assert!(harness::partition(&named(4), &SplitConfig::HeldOut { val: 0, test: 0 }, 0).is_err());
}

#[test]
fn partition_ignores_input_order() {
    let mut scenes = named(12);
    let split = SplitConfig::HeldOut { val: 2, test: 3 };
    let a = harness::partition(&scenes, &split, 4).unwrap();
    scenes.reverse();
    assert_eq!(a, harness::partition(&scenes, &split, 4).unwrap());
}

#[test]
fn explicit_partition_is_checked() {
    let scenes = named(3);
    let ids = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let ok = SplitConfig::Explicit { train: ids(&["s00", "s01"]), val: vec![], test: ids(&["s02"]) };
    assert_eq!(harness::partition(&scenes, &ok, 0).unwrap()["s02"], Split::Test);
    let twice = SplitConfig::Explicit { train: ids(&["s00", "s01"]), val: ids(&["s01"]), test: ids(&["s02"]) };
    assert!(harness::partition(&scenes, &twice, 0).is_err());
    let missing = SplitConfig::Explicit { train: ids(&["s00"]), val: vec![], test: ids(&["s02"]) };
    assert!(harness::partition(&scenes, &missing, 0).is_err());
}

#[test]
fn build_writes_complete_examples() {
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("src");
    scene_dir(&src, "a", 5);
    scene_dir(&src, "b", 4);
    let cfg = common::config(&src, "");
    let out = tmp.path().join("ds");
    let m = harness::build_from_config(&cfg, tmp.path(), &out).unwrap();
    assert_eq!(m.examples.len(), 3 + 2);
    assert_eq!(m.examples[0].id, "a/example_0000");
    for e in &m.examples {
        let mut names: Vec<_> =
            fs::read_dir(out.join(&e.id)).unwrap().map(|d| d.unwrap().file_name().into_string().unwrap()).collect();
        names.sort();
        assert_eq!(names, ["gt.exr", "long.png", "medium.png", "meta.json", "short.png"]);
        let side = harness::load_sidecar(&out, e).unwrap();
        assert!(side.gt_is_aligned());
        assert_eq!(side.ev_deltas, [-side.ev_step, 0, side.ev_step]);
    }
    let splits: std::collections::BTreeSet<_> = m.scenes.iter().map(|s| s.split.unwrap()).collect();
    assert_eq!(splits.len(), 2, "one train and one test scene");
    assert!(!tmp.path().join(".ds.partial").exists());
}

#[test]
fn rebuild_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("src");
    scene_dir(&src, "a", 4);
    scene_dir(&src, "b", 3);
    let cfg = common::config(&src, r#", "seed": 77"#);
    harness::build_from_config(&cfg, tmp.path(), &tmp.path().join("x")).unwrap();
    harness::build_from_config(&cfg, tmp.path(), &tmp.path().join("y")).unwrap();
    assert_eq!(common::tree(&tmp.path().join("x")), common::tree(&tmp.path().join("y")));

    let other = common::config(&src, r#", "seed": 78"#);
    harness::build_from_config(&other, tmp.path(), &tmp.path().join("z")).unwrap();
    assert_ne!(common::tree(&tmp.path().join("x")), common::tree(&tmp.path().join("z")));
}

#[test]
fn build_refuses_non_empty_output() {
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("src");
    scene_dir(&src, "a", 3);
    scene_dir(&src, "b", 3);
    let out = tmp.path().join("ds");
    fs::create_dir_all(&out).unwrap();
    fs::write(out.join("keep.txt"), "x").unwrap();
    assert!(harness::build_from_config(&common::config(&src, ""), tmp.path(), &out).is_err());
    assert_eq!(fs::read_to_string(out.join("keep.txt")).unwrap(), "x");
}

#[test]
fn noiseless_static_brackets_are_ordered() {
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("src");
    scene_dir(&src, "a", 2);
    scene_dir(&src, "b", 2);
    let cfg = common::config(
        &src,
        r#", "bracket_mode": "static", "noise": {"sigma_read": 0, "sigma_adc": 0, "photon_noise_enabled": false}"#,
    );
    let out = tmp.path().join("ds");
    let m = harness::build_from_config(&cfg, tmp.path(), &out).unwrap();
    for e in &m.examples {
        let side = harness::load_sidecar(&out, e).unwrap();
        let load = |i: usize| {
            let f = &side.frames[i];
            io::png::read_ldr_png(&out.join(&e.id).join(&f.file), f.exposure).unwrap()
        };
        let (s, med, l) = (load(0), load(1), load(2));
        for i in 0..s.data().len() {
            assert!(s.data()[i] <= med.data()[i] && med.data()[i] <= l.data()[i]);
        }
    }
}

#[test]
fn readme_config_example_parses() {
    let readme = include_str!("../../../README.md");
    let start = readme.find("```json\n").unwrap() + 8;
    let len = readme[start..].find("```").unwrap();
    let cfg: hdr_bench::DatasetConfig = serde_json::from_str(&readme[start..start + len]).unwrap();
    cfg.validate().unwrap();
    assert_eq!(cfg.ev_step_overrides["beach"], 3);
    assert_eq!(cfg.noise, hdrbench_core::NoiseParams::default());
}
