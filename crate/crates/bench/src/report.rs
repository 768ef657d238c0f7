//! Leaderboard rows and table rendering.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Published "no processing" reference scores on the withheld challenge
/// test set. Shown as table context only.
pub const REFERENCE_NO_PROCESSING_PSNR_MU: f64 = 25.266;
pub const REFERENCE_NO_PROCESSING_PSNR: f64 = 27.408;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardRow {
    pub method: String,
    pub track: String,
    pub psnr_mu: f64,
    pub psnr_linear: f64,
    /// Mean wall-clock reconstruction time per image, excluding I/O.
    pub runtime_s: f64,
    pub ensemble: String,
    pub images: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedRow {
    pub row: LeaderboardRow,
    pub psnr_mu_rank: usize,
    pub psnr_rank: usize,
    pub runtime_rank: usize,
}

/// Ordering by a key, ties broken by method name so ranks are total.
fn ranks_by(rows: &[LeaderboardRow], cmp: impl Fn(&LeaderboardRow, &LeaderboardRow) -> Ordering) -> Vec<usize> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| cmp(&rows[a], &rows[b]).then_with(|| rows[a].method.cmp(&rows[b].method)));
    let mut ranks = vec![0; rows.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    ranks
}

/// Rows sorted by PSNR-μ (descending, ties by method name) with a rank per
/// metric. PSNR ranks descend; runtime ranks ascend.
pub fn rank(rows: &[LeaderboardRow]) -> Vec<RankedRow> {
    let mu = ranks_by(rows, |a, b| b.psnr_mu.total_cmp(&a.psnr_mu));
    let lin = ranks_by(rows, |a, b| b.psnr_linear.total_cmp(&a.psnr_linear));
    let rt = ranks_by(rows, |a, b| a.runtime_s.total_cmp(&b.runtime_s));
    let mut ranked: Vec<RankedRow> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| RankedRow { row: r.clone(), psnr_mu_rank: mu[i], psnr_rank: lin[i], runtime_rank: rt[i] })
        .collect();
    ranked.sort_by_key(|r| r.psnr_mu_rank);
    ranked
}

fn footnote() -> String {
    format!(
        "Reference (challenge test set, no processing): PSNR-μ {REFERENCE_NO_PROCESSING_PSNR_MU:.3} dB, \
         PSNR {REFERENCE_NO_PROCESSING_PSNR:.3} dB. Not comparable with scores on synthetic datasets. \
         Runtimes are self-measured wall-clock seconds per image."
    )
}

pub fn render_markdown(rows: &[LeaderboardRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Config("report needs at least one row".into()));
    }
    let mut out = String::new();
    out.push_str("| Method | Track | PSNR-μ | PSNR | Runtime (s) | Ensemble |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for r in rank(rows) {
        let _ = writeln!(
            out,
            "| {} | {} | {:.3} ({}) | {:.3} ({}) | {:.4} ({}) | {} |",
            r.row.method,
            r.row.track,
            r.row.psnr_mu,
            r.psnr_mu_rank,
            r.row.psnr_linear,
            r.psnr_rank,
            r.row.runtime_s,
            r.runtime_rank,
            r.row.ensemble
        );
    }
    let _ = write!(out, "\n{}\n", footnote());
    Ok(out)
}

pub fn render_csv(rows: &[LeaderboardRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Config("report needs at least one row".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Config(format!("csv: {e}"));
    w.write_record([
        "method", "track", "psnr_mu", "psnr_mu_rank", "psnr", "psnr_rank", "runtime_s", "runtime_rank", "ensemble",
        "images",
    ])
    .map_err(csv_err)?;
    for r in rank(rows) {
        w.write_record([
            r.row.method.clone(),
            r.row.track.clone(),
            format!("{:.3}", r.row.psnr_mu),
            r.psnr_mu_rank.to_string(),
            format!("{:.3}", r.row.psnr_linear),
            r.psnr_rank.to_string(),
            format!("{:.4}", r.row.runtime_s),
            r.runtime_rank.to_string(),
            r.row.ensemble.clone(),
            r.row.images.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
    let mut out = String::from_utf8(bytes).expect("csv output is UTF-8");
    let _ = writeln!(out, "# {}", footnote());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(method: &str, mu: f64, lin: f64, rt: f64) -> LeaderboardRow {
        LeaderboardRow {
            method: method.into(),
            track: "multi".into(),
            psnr_mu: mu,
            psnr_linear: lin,
            runtime_s: rt,
            ensemble: "-".into(),
            images: 3,
        }
    }

    #[test]
    fn single_row_ranks_first_everywhere() {
        let r = rank(&[row("a", 30.0, 31.0, 0.1)]);
        assert_eq!((r[0].psnr_mu_rank, r[0].psnr_rank, r[0].runtime_rank), (1, 1, 1));
        let md = render_markdown(&[row("a", 30.0, 31.0, 0.1)]).unwrap();
        assert!(md.contains("30.000 (1)"));
        assert!(md.contains("25.266"));
        assert!(md.contains("27.408"));
    }

    #[test]
    fn ties_break_by_name() {
        let rows = [row("zeta", 30.0, 31.0, 1.0), row("alpha", 30.0, 29.0, 2.0)];
        let r = rank(&rows);
        assert_eq!(r[0].row.method, "alpha");
        assert_eq!(r[0].psnr_mu_rank, 1);
        assert_eq!(r[1].psnr_mu_rank, 2);
        assert_eq!(r[0].psnr_rank, 2);
    }

    #[test]
    fn ranks_are_permutations() {
        let rows: Vec<_> = (0..5)
            .map(|i| row(&format!("m{i}"), (i * 7 % 5) as f64, (i * 3 % 5) as f64, (i * 2 % 5) as f64))
            .collect();
        let r = rank(&rows);
        for key in [|r: &RankedRow| r.psnr_mu_rank, |r: &RankedRow| r.psnr_rank, |r: &RankedRow| r.runtime_rank] {
            let mut ks: Vec<usize> = r.iter().map(key).collect();
            ks.sort();
            assert_eq!(ks, vec![1, 2, 3, 4, 5]);
        }
        assert!(r.windows(2).all(|w| w[0].row.psnr_mu >= w[1].row.psnr_mu));
    }

    #[test]
    fn csv_quotes_ensemble_descriptions() {
        let mut r = row("merge+ensemble", 31.0, 30.0, 0.5);
        r.ensemble = "flips, transpose".into();
        let csv = render_csv(&[r]).unwrap();
        assert!(csv.contains("\"flips, transpose\""));
        assert!(csv.lines().last().unwrap().starts_with("# Reference"));
    }

    #[test]
    fn empty_report_is_rejected() {
        assert!(render_markdown(&[]).is_err());
        assert!(render_csv(&[]).is_err());
    }
}
