use std::fs;
use std::path::Path;
use std::process::Command;

use sonarloc::harness::{Experiment, ExperimentConfig};
use sonarloc::mission::meter_count;

const MAP: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/plant_map.json");

fn write_config(dir: &Path, mode: &str, mission: u8) -> std::path::PathBuf {
    fs::copy(MAP, dir.join("plant_map.json")).unwrap();
    let path = dir.join("exp.json");
    let body = format!(
        r#"{{"mode":"{mode}","mission_id":{mission},"frontends":"sad+prec","seeds":[1],
            "map":"plant_map.json","snapshot_every_m":25,
            "particles":300}}"#
    );
    fs::write(&path, body).unwrap();
    path
}

fn localize(args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_localize"))
        .args(args)
        .status()
        .expect("spawn localize");
    assert!(status.success(), "localize {args:?} failed");
}

fn files_with_prefix(dir: &Path, prefix: &str) -> usize {
    fs::read_dir(dir)
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .file_name()
                .to_string_lossy()
                .starts_with(prefix)
        })
        .count()
}

#[test]
fn seeds_override_gives_one_trace_per_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "tracking", 1);
    let out = tmp.path().join("out");
    localize(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seeds",
        "4,5,6",
    ]);
    assert_eq!(files_with_prefix(&out, "trace_"), 3);
    assert_eq!(files_with_prefix(&out, "report"), 1);
    assert_eq!(files_with_prefix(&out, "particles_"), 0);

    let exp = Experiment::prepare(ExperimentConfig::from_file(&cfg).unwrap()).unwrap();
    let expected = meter_count(exp.mission.total_length()) as usize;
    let trace = fs::read_to_string(out.join("trace_5.csv")).unwrap();
    let meters: Vec<usize> = trace
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(meters, (1..=expected).collect::<Vec<_>>());
}

#[test]
fn snapshots_flag_dumps_particles() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "tracking", 2);
    let out = tmp.path().join("out");
    localize(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--snapshots",
    ]);
    assert!(files_with_prefix(&out, "particles_1_") > 0);
}

#[test]
fn recorded_stream_replays() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "localization", 3);
    let stream = tmp.path().join("stream.csv");
    let out = tmp.path().join("replay");
    localize(&[
        "stream",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "7",
        "--out",
        stream.to_str().unwrap(),
    ]);
    localize(&[
        "replay",
        "--config",
        cfg.to_str().unwrap(),
        "--stream",
        stream.to_str().unwrap(),
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(out.join("report.csv").exists());
    assert_eq!(files_with_prefix(&out, "trace_"), 1);
}
