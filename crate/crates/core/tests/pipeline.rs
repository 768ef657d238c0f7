use hdrbench_core::baselines::{merge_bracket, no_processing, self_ensemble};
use hdrbench_core::rng::FrameKey;
use hdrbench_core::synthesis::{synthesize_bracket, synthesize_bracket_from, synthesize_frame};
use hdrbench_core::{score, BracketSpec, ExposureSettings, HdrImage, NoiseParams, TonemapParams};

/// Straightforward PSNR and PSNR-μ with std math, for comparison.
fn oracle(est: &[f32], gt: &[f32]) -> (f64, f64) {
    let n = gt.len() as f64;
    let peak = gt.iter().cloned().fold(0.0f32, f32::max) as f64;
    let mse_lin = est.iter().zip(gt).map(|(&e, &g)| (e as f64 / peak - g as f64 / peak).powi(2)).sum::<f64>() / n;

    let mut sorted: Vec<f64> = gt.iter().map(|&v| v as f64).collect();
    sorted.sort_by(f64::total_cmp);
    let rank = 0.99 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let p99 = sorted[lo] + (sorted[hi] - sorted[lo]) * (rank - lo as f64);
    let t = |v: f32| (1.0 + 5000.0 * (v as f64 / p99).tanh()).ln() / 5001.0f64.ln();
    let mse_mu = est.iter().zip(gt).map(|(&e, &g)| (t(e) - t(g)).powi(2)).sum::<f64>() / n;
    (-10.0 * mse_lin.log10(), -10.0 * mse_mu.log10())
}

fn scene(w: usize, h: usize) -> HdrImage {
    HdrImage::from_fn(w, h, 3, |x, y, c| {
        let base = 5.0 + 40.0 * (x as f32 / w as f32) + 3.0 * c as f32;
        if (x + y) % 17 == 0 {
            base * 20.0
        } else {
            base * (1.0 + 0.5 * ((x * 7 + y * 3) as f32).sin())
        }
    })
    .unwrap()
}

#[test]
fn scores_match_direct_computation() {
    let gt = scene(40, 30);
    let est = HdrImage::from_fn(40, 30, 3, |x, y, c| gt.get(x, y, c) * (1.0 + 0.05 * ((x + 2 * y + c) % 5) as f32))
        .unwrap();
    let s = score(&est, &gt, &TonemapParams::default()).unwrap();
    let (lin, mu) = oracle(est.data(), gt.data());
    assert!((s.psnr_linear - lin).abs() < 1e-9, "{} vs {lin}", s.psnr_linear);
    assert!((s.psnr_mu - mu).abs() < 1e-9, "{} vs {mu}", s.psnr_mu);
}

#[test]
fn noiseless_merge_recovers_radiance_within_quantization() {
    let gt = scene(24, 16);
    let base = ExposureSettings::new(0.02, 1000.0, 0.0, 1.0).unwrap();
    let spec = BracketSpec::symmetric(3, base).unwrap();
    let frames = synthesize_bracket(&gt, &spec, &NoiseParams::disabled()).unwrap();
    let merged = merge_bracket(&frames, &NoiseParams::disabled()).unwrap();
    let single = no_processing(&frames[1]).unwrap();
    let s_merge = score(&merged, &gt, &TonemapParams::default()).unwrap();
    let s_single = score(&single, &gt, &TonemapParams::default()).unwrap();
    assert!(s_merge.psnr_mu > s_single.psnr_mu + 1.0, "{s_merge:?} vs {s_single:?}");
    // Where the long frame is unclipped, the error is bounded by its bin width.
    let long = &frames[2];
    let long_bin = long.exposure().lsb() * long.exposure().g / long.exposure().t;
    for (i, (&m, &g)) in merged.data().iter().zip(gt.data()).enumerate() {
        if long.data()[i] < 254 {
            assert!(((m - g) as f64).abs() <= long_bin, "sample {i}: {m} vs {g}");
        }
    }
}

#[test]
fn merge_is_flip_equivariant() {
    let gt = scene(13, 9);
    let spec = BracketSpec::symmetric(2, ExposureSettings::new(0.05, 1000.0, 0.0, 1.0).unwrap()).unwrap();
    let noise = NoiseParams::default().with_seed(5);
    let frames = synthesize_bracket(&gt, &spec, &noise).unwrap();
    let direct = merge_bracket(&frames, &noise).unwrap();
    let ens = self_ensemble(&frames, |f| merge_bracket(f, &noise)).unwrap();
    assert_eq!(direct, ens);
}

#[test]
fn synthesis_is_keyed_and_reproducible() {
    let gt = scene(16, 16);
    let exp = ExposureSettings::new(0.05, 1000.0, 0.0, 1.0).unwrap();
    let noise = NoiseParams::default().with_seed(42);
    let a = synthesize_frame(&gt, &exp, &noise, FrameKey::new(1, 0)).unwrap();
    assert_eq!(a, synthesize_frame(&gt, &exp, &noise, FrameKey::new(1, 0)).unwrap());
    assert_ne!(a, synthesize_frame(&gt, &exp, &noise, FrameKey::new(2, 0)).unwrap());
    assert_ne!(a, synthesize_frame(&gt, &exp, &noise, FrameKey::new(1, 1)).unwrap());
    assert_ne!(a, synthesize_frame(&gt, &exp, &noise.with_seed(43), FrameKey::new(1, 0)).unwrap());

    let spec = BracketSpec::symmetric(2, exp).unwrap();
    let frames = [&gt, &gt, &gt];
    let b1 = synthesize_bracket_from(&frames, &spec, &noise, 9).unwrap();
    let b2 = synthesize_bracket_from(&frames, &spec, &noise, 9).unwrap();
    assert_eq!(b1, b2);
    assert_eq!(b1[1], synthesize_frame(&gt, &exp, &noise, FrameKey::new(9, 1)).unwrap());
}

#[test]
fn bad_brackets_are_rejected() {
    let base = ExposureSettings::default();
    assert!(BracketSpec::new(vec![-2, 2], base).is_err());
    assert!(BracketSpec::new(vec![0, -2, 2], base).is_err());
    assert!(BracketSpec::new(vec![-9, 0], base).is_err());
    assert!(BracketSpec::new(vec![], base).is_err());
    assert!(BracketSpec::new(vec![-1, 0, 3, 5], base).is_ok());
}
