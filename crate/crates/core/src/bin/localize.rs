use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use sonarloc::frontend::{
    detection_stream, read_stream_csv, write_stream_csv, EmulatedFrontend, ReplayFrontend,
};
use sonarloc::harness::{
    aggregate, emit_outputs, run_experiment, seeded_rng, write_report_csv, write_table_csv,
    Experiment, ExperimentConfig, Frontends, ReportRow, FRONTEND_STREAM,
};

#[derive(Parser)]
#[command(
    name = "localize",
    version,
    about = "Sonar particle-filter localization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its report, traces and snapshots.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seeds listed in the config.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        /// Also dump particle clouds every `snapshot_every_m` metres.
        #[arg(long)]
        snapshots: bool,
    },
    /// Sweep both frontend combinations over missions 1 to 3.
    Table {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
    },
    /// Record the emulated frontend output along the configured mission.
    Stream {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the filter against a recorded detection stream.
    Replay {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        stream: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        snapshots: bool,
    },
}

fn load(path: &Path, seeds: Option<Vec<u64>>) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_file(path)
        .with_context(|| format!("loading config {}", path.display()))?;
    if let Some(seeds) = seeds {
        cfg.seeds = seeds;
    }
    Ok(cfg)
}

fn summary(row: &ReportRow) {
    let r = &row.report;
    println!(
        "{} {} mission {}: {}/{} succeeded ({:.1}%), accuracy {:.3} ± {:.3} m",
        row.mode,
        row.frontends,
        row.mission_id,
        r.successes,
        r.runs,
        r.success_rate,
        r.accuracy.mean,
        r.accuracy.std,
    );
}

fn run(config: &Path, out: &Path, seeds: Option<Vec<u64>>, snapshots: bool) -> Result<()> {
    let cfg = load(config, seeds)?;
    let runs = run_experiment(&cfg, snapshots)?;
    let row = ReportRow {
        mode: cfg.mode,
        frontends: cfg.frontends,
        mission_id: cfg.mission_id,
        report: aggregate(&runs, &cfg.success),
    };
    emit_outputs(&row, &runs, out, snapshots)?;
    summary(&row);
    Ok(())
}

fn table(config: &Path, out: &Path, seeds: Option<Vec<u64>>) -> Result<()> {
    let base = load(config, seeds)?;
    let cases: Vec<(Frontends, u8)> = [Frontends::Sad, Frontends::SadPrec]
        .into_iter()
        .flat_map(|f| (1..=3).map(move |m| (f, m)))
        .collect();
    let rows = cases
        .par_iter()
        .map(|&(frontends, mission_id)| -> Result<ReportRow> {
            let mut cfg = base.clone();
            cfg.frontends = frontends;
            cfg.mission_id = mission_id;
            let runs = run_experiment(&cfg, false)?;
            let row = ReportRow {
                mode: cfg.mode,
                frontends,
                mission_id,
                report: aggregate(&runs, &cfg.success),
            };
            let dir = out.join(format!(
                "{}_m{}",
                frontends.to_string().replace('+', "_"),
                mission_id
            ));
            emit_outputs(&row, &runs, dir, false)?;
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    write_report_csv(out.join("report.csv"), &rows)?;
    write_table_csv(out.join("table.csv"), &rows)?;
    rows.iter().for_each(summary);
    Ok(())
}

fn stream(config: &Path, seed: u64, out: &Path) -> Result<()> {
    let exp = Experiment::prepare(load(config, None)?)?;
    let cfg = &exp.config;
    let mut frontend = EmulatedFrontend::new(
        &exp.map,
        cfg.sonar,
        cfg.detector,
        seeded_rng(seed, FRONTEND_STREAM),
    );
    let frames = detection_stream(
        &exp.mission.trajectory(),
        cfg.mission.sonar_rate_hz,
        &mut frontend,
    )?;
    write_stream_csv(out, &frames)?;
    let hits = frames.iter().filter(|f| f.detection.is_some()).count();
    println!(
        "{} frames, {} with a detection -> {}",
        frames.len(),
        hits,
        out.display()
    );
    Ok(())
}

fn replay(config: &Path, stream: &Path, seed: u64, out: &Path, snapshots: bool) -> Result<()> {
    let exp = Experiment::prepare(load(config, Some(vec![seed]))?)?;
    let frames = read_stream_csv(stream)?;
    let mut frontend = ReplayFrontend::new(frames);
    let run = exp.run_with_frontend(seed, &mut frontend, snapshots)?;
    if frontend.remaining() > 0 {
        eprintln!("warning: {} frames left unused", frontend.remaining());
    }
    let cfg = &exp.config;
    let runs = [run];
    let row = ReportRow {
        mode: cfg.mode,
        frontends: cfg.frontends,
        mission_id: cfg.mission_id,
        report: aggregate(&runs, &cfg.success),
    };
    emit_outputs(&row, &runs, out, snapshots)?;
    summary(&row);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            seeds,
            snapshots,
        } => run(&config, &out, seeds, snapshots),
        Command::Table { config, out, seeds } => table(&config, &out, seeds),
        Command::Stream { config, seed, out } => stream(&config, seed, &out),
        Command::Replay {
            config,
            stream: path,
            seed,
            out,
            snapshots,
        } => replay(&config, &path, seed, &out, snapshots),
    }
}
