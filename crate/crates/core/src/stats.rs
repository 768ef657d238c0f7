//! Deterministic reductions.

use alloc::vec::Vec;

const PAIRWISE_BLOCK: usize = 64;

/// Pairwise (tree) summation. The split points depend only on the slice
/// length, so the result is reproducible regardless of how callers chunk
/// the work, and rounding error grows as O(log n).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Sums `f(i)` for `i in 0..n` with the same tree as [`pairwise_sum`],
/// without materialising the terms.
pub fn pairwise_sum_by(n: usize, f: &impl Fn(usize) -> f64) -> f64 {
    fn go(lo: usize, hi: usize, f: &impl Fn(usize) -> f64) -> f64 {
        if hi - lo <= PAIRWISE_BLOCK {
            return (lo..hi).map(f).sum();
        }
        let mid = lo + (hi - lo) / 2;
        go(lo, mid, f) + go(mid, hi, f)
    }
    go(0, n, f)
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(pairwise_sum(values) / values.len() as f64)
    }
}

/// Percentile with linear interpolation between order statistics: the
/// sample at fractional rank `q * (n - 1)` of the sorted data. `q` is in
/// `[0, 1]`. Returns `None` for empty input or NaN.
pub fn percentile_linear(values: impl IntoIterator<Item = f64>, q: f64) -> Option<f64> {
    let mut sorted: Vec<f64> = values.into_iter().collect();
    if sorted.is_empty() || !(0.0..=1.0).contains(&q) || sorted.iter().any(|v| v.is_nan()) {
        return None;
    }
    sorted.sort_unstable_by(f64::total_cmp);
    let rank = q * (sorted.len() - 1) as f64;
    let lo = libm::floor(rank) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = rank - lo as f64;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}
