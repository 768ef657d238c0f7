use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hdr_bench::config::DatasetConfig;
use hdr_bench::error::{Error, Result};
use hdr_bench::report::{render_csv, render_markdown, LeaderboardRow};
use hdr_bench::track::{self, Method, SplitFilter, Track};
use hdr_bench::{harness, io};
use hdrbench_core::TonemapParams;

/// Synthesize bracketed LDR benchmarks from HDR video, run baseline
/// reconstructions and score them with PSNR and PSNR-μ.
#[derive(Parser)]
#[command(name = "hdr-bench", version)]
struct Cli {
    /// Overrides the dataset seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Dataset configuration JSON.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Selection {
    #[arg(long)]
    dataset: PathBuf,
    /// all | train | val | test
    #[arg(long, default_value = "test")]
    split: String,
}

#[derive(Subcommand)]
enum Command {
    /// Build a dataset from the scenes named in --config.
    Build {
        #[arg(long)]
        out: PathBuf,
    },
    /// Write one OpenEXR estimate per example.
    Reconstruct {
        #[command(flatten)]
        sel: Selection,
        #[arg(long)]
        track: String,
        /// no-processing | merge | merge+ensemble
        #[arg(long)]
        method: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score estimates against ground truth; prints JSON lines.
    Score {
        #[arg(long, requires = "estimates")]
        dataset: Option<PathBuf>,
        #[arg(long)]
        estimates: Option<PathBuf>,
        #[arg(long, default_value = "test")]
        split: String,
        /// Score a single estimate file (with --gt) instead of a dataset.
        #[arg(long, requires = "gt", conflicts_with = "dataset")]
        estimate: Option<PathBuf>,
        #[arg(long)]
        gt: Option<PathBuf>,
        #[arg(long, default_value_t = hdrbench_core::CHALLENGE_MU)]
        mu: f64,
        /// Write records here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct and score one method on one track.
    RunTrack {
        #[command(flatten)]
        sel: Selection,
        #[arg(long)]
        track: String,
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = hdrbench_core::CHALLENGE_MU)]
        mu: f64,
        /// Directory for scores.jsonl and row.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Render leaderboard rows (row.json files) as a table.
    Report {
        #[arg(required = true)]
        rows: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Markdown,
    Csv,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            io::create_parent(p)?;
            std::fs::write(p, text).map_err(|e| Error::io(p, e))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(cli: &Cli) -> Result<(DatasetConfig, PathBuf)> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config("build needs --config".into()))?;
    let mut config: DatasetConfig = io::read_json(path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((config, dir))
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Build { out } => {
            let (config, dir) = load_config(cli)?;
            let m = harness::build_from_config(&config, &dir, out)?;
            eprintln!("built {} examples from {} scenes (config {})", m.examples.len(), m.scenes.len(), &m.config_hash[..12]);
        }
        Command::Reconstruct { sel, track, method, out } => {
            let n = track::reconstruct_dataset(&sel.dataset, track.parse()?, method.parse()?, sel.split.parse()?, out)?;
            eprintln!("wrote {n} estimates to {}", out.display());
        }
        Command::Score { dataset, estimates, split, estimate, gt, mu, out } => {
            let params = TonemapParams::new(*mu)?;
            let records = match (dataset, estimates, estimate, gt) {
                (Some(d), Some(e), _, _) => track::score_dataset(d, e, split.parse()?, &params)?,
                (_, _, Some(e), Some(g)) => {
                    let id = e.file_stem().and_then(|s| s.to_str()).unwrap_or("estimate");
                    vec![track::score_pair(id, &io::read_hdr(e)?, &io::read_hdr(g)?, &params)?]
                }
                _ => return Err(Error::Config("score needs --dataset/--estimates or --estimate/--gt".into())),
            };
            match out {
                Some(p) => track::write_records_jsonl(p, &records)?,
                None => {
                    for r in &records {
                        println!("{}", serde_json::to_string(r).expect("record serializes"));
                    }
                }
            }
        }
        Command::RunTrack { sel, track: t, method, mu, out } => {
            let track: Track = t.parse()?;
            let method: Method = method.parse()?;
            let filter: SplitFilter = sel.split.parse()?;
            let run = track::run_track(&sel.dataset, track, method, filter, &TonemapParams::new(*mu)?)?;
            track::write_records_jsonl(&out.join("scores.jsonl"), &run.records)?;
            io::write_json(&out.join("row.json"), &run.row)?;
            println!(
                "{} [{}]: PSNR-μ {:.3} dB, PSNR {:.3} dB over {} images",
                run.row.method, run.row.track, run.row.psnr_mu, run.row.psnr_linear, run.row.images
            );
        }
        Command::Report { rows, format, out } => {
            let rows: Vec<LeaderboardRow> = rows.iter().map(|p| io::read_json(p)).collect::<Result<_>>()?;
            let text = match format {
                Format::Markdown => render_markdown(&rows)?,
                Format::Csv => render_csv(&rows)?,
            };
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
