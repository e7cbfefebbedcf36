mod data;
mod evalcmd;
mod maps;
mod output;
mod synthcmd;
mod traj;
mod ts;

use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

/// Trajectory dataset analysis: descriptive maps, two day-level anomaly
/// detection pipelines, and evaluation against day labels.
#[derive(Parser)]
#[command(name = "trajan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic labeled dataset directory.
    Synth(SynthArgs),
    /// Accumulate all track points into a scene-sized grid (CSV + PPM).
    Heatmap(MapArgs),
    /// Per-patch daily activity matrix (CSV + PPM + date sidecar).
    Footmap(FootmapArgs),
    /// Cluster-likelihood anomaly detection over sliding weekday windows.
    PredictTraj(TrajArgs),
    /// Nearest-neighbor anomaly detection on per-day count series.
    PredictTs(TsArgs),
    /// Confusion matrix and metrics from prediction and truth CSVs.
    Eval(EvalArgs),
    /// Count-series detection swept over DTW band radii.
    SweepTs(SweepArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Dataset directory: YYYY-MM-DD.csv day files plus scene.toml.
    #[arg(long, value_name = "DIR")]
    data: PathBuf,
    /// File of dates to drop before processing, one YYYY-MM-DD per line.
    #[arg(long, value_name = "FILE")]
    exclude: Option<PathBuf>,
    /// Day-label CSV (date,label); defaults to DIR/labels.csv when present.
    #[arg(long, value_name = "FILE")]
    annotations: Option<PathBuf>,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    out: OutArgs,
    /// Generator spec TOML; defaults to a built-in two-lane scene.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Number of days (overrides the spec file).
    #[arg(long)]
    days: Option<u32>,
    /// First date (overrides the spec file).
    #[arg(long)]
    start: Option<NaiveDate>,
    /// Use the built-in four-lane scene instead of the two-lane one.
    #[arg(long, conflicts_with = "spec")]
    four_lanes: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Count-matrix CSV name within --out.
    #[arg(long, value_name = "NAME", default_value = "heatmap.csv")]
    csv: String,
    /// Rendered image name within --out.
    #[arg(long, value_name = "NAME", default_value = "heatmap.ppm")]
    ppm: String,
}

#[derive(Args)]
struct FootmapArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    out: OutArgs,
    #[arg(long, value_name = "NAME", default_value = "footmap.csv")]
    csv: String,
    #[arg(long, value_name = "NAME", default_value = "footmap.ppm")]
    ppm: String,
    /// Sidecar CSV mapping each column to its date.
    #[arg(long, value_name = "NAME", default_value = "footmap_dates.csv")]
    dates: String,
}

#[derive(Args)]
struct TrajArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Per-day prediction CSV name within --out.
    #[arg(long, value_name = "NAME", default_value = "traj_predictions.csv")]
    csv: String,
    /// Day is anomalous when its anomalous-track ratio reaches this.
    #[arg(long, default_value_t = 0.01)]
    lambda: f64,
    /// A track is anomalous only beyond this squared-pixel distance.
    #[arg(long, default_value_t = 1000.0)]
    delta: f64,
    /// Segment neighborhood radius, pixels.
    #[arg(long, default_value_t = 25.0)]
    eps: f64,
    /// Density threshold and minimum distinct tracks per cluster.
    #[arg(long, default_value_t = 3)]
    min_lines: usize,
    /// Representative sweep spacing, pixels.
    #[arg(long, default_value_t = 12.5)]
    smoothing: f64,
    /// Perpendicular, parallel, and angular distance weights.
    #[arg(long, value_name = "W1,W2,W3", default_value = "1,1,1", value_parser = parse_weights)]
    weights: [f64; 3],
    /// Window span in days; one prediction per full window.
    #[arg(long, default_value_t = 28)]
    omega: u32,
    /// Day stride between window slots.
    #[arg(long, default_value_t = 7)]
    stride: u32,
    /// Keep every consecutive point pair instead of MDL partitioning.
    #[arg(long)]
    no_mdl: bool,
    /// Also write per-track diagnostics CSV.
    #[arg(long)]
    per_track: bool,
    /// Also write each window's cluster representatives and membership.
    #[arg(long)]
    dump_clusters: bool,
}

#[derive(Args)]
struct TsArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    out: OutArgs,
    #[arg(long, value_name = "NAME", default_value = "ts_predictions.csv")]
    csv: String,
    /// Count-interval length in seconds; must divide the day length.
    #[arg(long, default_value_t = 15)]
    theta: u32,
    /// Neighbors voting on each test day.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Warping band radius.
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Disable lower-bound pruning (results must not change).
    #[arg(long)]
    no_prune: bool,
    /// Also write every day's count series CSV.
    #[arg(long)]
    dump_series: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Prediction CSV with date and predicted columns.
    #[arg(long, value_name = "FILE")]
    pred: PathBuf,
    /// Truth CSV: date,label (header optional).
    #[arg(long, value_name = "FILE")]
    truth: PathBuf,
    #[command(flatten)]
    out: OutArgs,
    #[arg(long, value_name = "NAME", default_value = "metrics.csv")]
    csv: String,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    out: OutArgs,
    #[arg(long, value_name = "NAME", default_value = "sweep.csv")]
    csv: String,
    #[arg(long, default_value_t = 15)]
    theta: u32,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Sweep band radii 0..=r_max.
    #[arg(long, default_value_t = 10)]
    r_max: usize,
}

fn parse_weights(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected three comma-separated weights".into());
    }
    let mut w = [0.0; 3];
    for (slot, part) in w.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("bad weight {part:?}"))?;
    }
    Ok(w)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(args) => synthcmd::run(args),
        Command::Heatmap(args) => maps::run_heatmap(args),
        Command::Footmap(args) => maps::run_footmap(args),
        Command::PredictTraj(args) => traj::run(args),
        Command::PredictTs(args) => ts::run_predict(args),
        Command::Eval(args) => evalcmd::run(args),
        Command::SweepTs(args) => ts::run_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("trajan: {e}");
            ExitCode::FAILURE
        }
    }
}
