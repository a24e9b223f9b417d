//! CSV and gnuplot-friendly result files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::config::{Frontends, Mode};
use super::metrics::{AggregateReport, MeanStd, RunMetrics};

/// One experiment's aggregate, labelled for the report table.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub mode: Mode,
    pub frontends: Frontends,
    pub mission_id: u8,
    pub report: AggregateReport,
}

fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.6}")
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn mean_std(m: &MeanStd) -> String {
    format!("{},{}", num(m.mean), num(m.std))
}

/// Long-form table: one line per experiment.
pub fn write_report_csv(path: impl AsRef<Path>, rows: &[ReportRow]) -> Result<()> {
    let mut s = String::from(
        "mode,frontends,mission,runs,successes,success_rate,acc_mean,acc_std,acc_all_mean,acc_all_std,yaw_mean,yaw_std\n",
    );
    for r in rows {
        let rep = &r.report;
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.mode,
            r.frontends,
            r.mission_id,
            rep.runs,
            rep.successes,
            num(rep.success_rate),
            mean_std(&rep.accuracy),
            mean_std(&rep.accuracy_all),
            mean_std(&rep.yaw),
        )
        .expect("writing to a String");
    }
    write_file(path.as_ref(), &s)
}

/// Wide table: one line per frontend combination, one column group
/// (success rate, accuracy mean, accuracy std) per mission.
pub fn write_table_csv(path: impl AsRef<Path>, rows: &[ReportRow]) -> Result<()> {
    let mut missions: Vec<u8> = rows.iter().map(|r| r.mission_id).collect();
    missions.sort_unstable();
    missions.dedup();
    let mut frontends: Vec<Frontends> = Vec::new();
    for r in rows {
        if !frontends.contains(&r.frontends) {
            frontends.push(r.frontends);
        }
    }
    let mut s = String::from("method");
    for m in &missions {
        write!(s, ",m{m}_success_rate,m{m}_acc_mean,m{m}_acc_std").expect("String");
    }
    s.push('\n');
    for f in frontends {
        s.push_str(match f {
            Frontends::Sad => "PF-SAD",
            Frontends::SadPrec => "PF-SAD+PRec",
        });
        for m in &missions {
            match rows.iter().find(|r| r.frontends == f && r.mission_id == *m) {
                Some(r) => write!(
                    s,
                    ",{},{}",
                    num(r.report.success_rate),
                    mean_std(&r.report.accuracy)
                ),
                None => write!(s, ",,,"),
            }
            .expect("String");
        }
        s.push('\n');
    }
    write_file(path.as_ref(), &s)
}

/// Per-metre trace of one run.
pub fn write_trace_csv(path: impl AsRef<Path>, run: &RunMetrics) -> Result<()> {
    let mut s = String::from(
        "meter,t,truth_x,truth_y,truth_yaw,est_x,est_y,est_yaw,position_error,yaw_error,ess\n",
    );
    for p in &run.samples {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            p.meter,
            num(p.time),
            num(p.truth.x),
            num(p.truth.y),
            num(p.truth.yaw),
            num(p.estimate.x),
            num(p.estimate.y),
            num(p.estimate.yaw),
            num(p.position_error),
            num(p.yaw_error),
            num(p.ess),
        )
        .expect("String");
    }
    write_file(path.as_ref(), &s)
}

/// Whitespace-separated error envelope for plotting with gnuplot
/// (`plot 'envelope.dat' u 1:2:4 w filledcurves, '' u 1:3 w l`).
pub fn write_envelope(path: impl AsRef<Path>, report: &AggregateReport) -> Result<()> {
    let mut s = String::from(
        "# meter pos_min pos_mean pos_max pos_std yaw_min yaw_mean yaw_max yaw_std runs\n",
    );
    for e in &report.envelope {
        writeln!(
            s,
            "{} {:.6} {:.6} {:.6} {:.6} {:.6} {:.6} {:.6} {:.6} {}",
            e.meter,
            e.position_min,
            e.position_mean,
            e.position_max,
            e.position_std,
            e.yaw_min,
            e.yaw_mean,
            e.yaw_max,
            e.yaw_std,
            e.runs
        )
        .expect("String");
    }
    write_file(path.as_ref(), &s)
}

/// Writes `report.csv`, `envelope.dat`, one `trace_<seed>.csv` per run and,
/// when requested, `particles_<seed>_<meter>.csv` snapshots. Returns the
/// paths written.
pub fn emit_outputs(
    row: &ReportRow,
    runs: &[RunMetrics],
    out_dir: impl AsRef<Path>,
    snapshots: bool,
) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let report = dir.join("report.csv");
    write_report_csv(&report, std::slice::from_ref(row))?;
    written.push(report);

    let envelope = dir.join("envelope.dat");
    write_envelope(&envelope, &row.report)?;
    written.push(envelope);

    for run in runs {
        let trace = dir.join(format!("trace_{}.csv", run.seed));
        write_trace_csv(&trace, run)?;
        written.push(trace);
        if snapshots {
            for (meter, set) in &run.snapshots {
                let p = dir.join(format!("particles_{}_{}.csv", run.seed, meter));
                set.write_csv(&p)?;
                written.push(p);
            }
        }
    }
    Ok(written)
}
