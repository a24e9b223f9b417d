use std::collections::BTreeMap;

use crate::filter::ParticleSet;
use crate::world::Pose2;

use super::config::Thresholds;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeterSample {
    pub meter: u64,
    pub time: f64,
    pub truth: Pose2,
    pub estimate: Pose2,
    pub position_error: f64,
    /// Absolute wrapped yaw error.
    pub yaw_error: f64,
    pub ess: f64,
}

#[derive(Debug, Clone)]
pub struct RunMetrics {
    pub seed: u64,
    pub samples: Vec<MeterSample>,
    pub final_position_error: f64,
    pub final_yaw_error: f64,
    /// Position spread of the final particle cloud, metres.
    pub final_spread: f64,
    pub converged: bool,
    /// Arc length actually travelled.
    pub distance: f64,
    pub wall_clock_s: f64,
    pub snapshots: Vec<(u64, ParticleSet)>,
}

impl RunMetrics {
    pub fn succeeded(&self, thresholds: &Thresholds) -> bool {
        !self.samples.is_empty()
            && thresholds.accepts(self.final_position_error, self.final_yaw_error)
    }
}

/// Mean and sample standard deviation; both zero for fewer than two values
/// (the mean is NaN for none).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl MeanStd {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let values: Vec<f64> = values.into_iter().collect();
        let n = values.len();
        if n == 0 {
            return MeanStd {
                mean: f64::NAN,
                std: f64::NAN,
                n,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        MeanStd { mean, std, n }
    }
}

/// Spread of the per-metre errors across runs at one odometer reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeRow {
    pub meter: u64,
    pub runs: usize,
    pub position_min: f64,
    pub position_mean: f64,
    pub position_max: f64,
    pub position_std: f64,
    pub yaw_min: f64,
    pub yaw_mean: f64,
    pub yaw_max: f64,
    pub yaw_std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub runs: usize,
    pub successes: usize,
    /// Percent, 0–100.
    pub success_rate: f64,
    /// Final position error over successful runs.
    pub accuracy: MeanStd,
    /// Final position error over every run.
    pub accuracy_all: MeanStd,
    /// Final yaw error over successful runs.
    pub yaw: MeanStd,
    pub envelope: Vec<EnvelopeRow>,
}

pub fn aggregate(runs: &[RunMetrics], thresholds: &Thresholds) -> AggregateReport {
    let ok: Vec<&RunMetrics> = runs.iter().filter(|r| r.succeeded(thresholds)).collect();
    let success_rate = if runs.is_empty() {
        0.0
    } else {
        100.0 * ok.len() as f64 / runs.len() as f64
    };

    let mut by_meter: BTreeMap<u64, Vec<&MeterSample>> = BTreeMap::new();
    for s in runs.iter().flat_map(|r| &r.samples) {
        by_meter.entry(s.meter).or_default().push(s);
    }
    let envelope = by_meter
        .into_iter()
        .map(|(meter, ss)| {
            let pos = MeanStd::of(ss.iter().map(|s| s.position_error));
            let yaw = MeanStd::of(ss.iter().map(|s| s.yaw_error));
            let fold = |f: fn(&MeterSample) -> f64, init: f64, pick: fn(f64, f64) -> f64| {
                ss.iter().map(|s| f(s)).fold(init, pick)
            };
            EnvelopeRow {
                meter,
                runs: ss.len(),
                position_min: fold(|s| s.position_error, f64::INFINITY, f64::min),
                position_mean: pos.mean,
                position_max: fold(|s| s.position_error, 0.0, f64::max),
                position_std: pos.std,
                yaw_min: fold(|s| s.yaw_error, f64::INFINITY, f64::min),
                yaw_mean: yaw.mean,
                yaw_max: fold(|s| s.yaw_error, 0.0, f64::max),
                yaw_std: yaw.std,
            }
        })
        .collect();

    AggregateReport {
        runs: runs.len(),
        successes: ok.len(),
        success_rate,
        accuracy: MeanStd::of(ok.iter().map(|r| r.final_position_error)),
        accuracy_all: MeanStd::of(runs.iter().map(|r| r.final_position_error)),
        yaw: MeanStd::of(ok.iter().map(|r| r.final_yaw_error)),
        envelope,
    }
}
