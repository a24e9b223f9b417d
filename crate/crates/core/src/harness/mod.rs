//! Experiment driver: simulates missions, runs the filter against emulated
//! (or replayed) frontends, and scores the result once per travelled metre.

mod config;
mod metrics;
mod output;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use config::{ExperimentConfig, Frontends, MapSource, Mode, Thresholds};
pub use metrics::{aggregate, AggregateReport, EnvelopeRow, MeanStd, MeterSample, RunMetrics};
pub use output::{
    emit_outputs, write_envelope, write_report_csv, write_table_csv, write_trace_csv, ReportRow,
};

use crate::angle::angle_diff;
use crate::error::Result;
use crate::filter::ParticleSet;
use crate::frontend::{EmulatedFrontend, Frontend};
use crate::mission::{build_mission, meter_marks, step_truth, Mission};
use crate::world::WorldMap;

/// Independent RNG streams derived from one seed.
pub const FILTER_STREAM: u64 = 1;
pub const FRONTEND_STREAM: u64 = 2;
pub const ODOMETRY_STREAM: u64 = 3;

pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Everything shared by the runs of one experiment.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub map: WorldMap,
    pub mission: Mission,
}

impl Experiment {
    pub fn prepare(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let map = config.load_world()?;
        let mission = Mission::new(build_mission(config.mission_id, &map, &config.mission)?)?;
        Ok(Experiment {
            config,
            map,
            mission,
        })
    }

    /// One seed against the emulated frontends.
    pub fn run_seed(&self, seed: u64, keep_snapshots: bool) -> Result<RunMetrics> {
        let mut frontend = EmulatedFrontend::new(
            &self.map,
            self.config.sonar,
            self.config.detector,
            seeded_rng(seed, FRONTEND_STREAM),
        );
        self.run_with_frontend(seed, &mut frontend, keep_snapshots)
    }

    fn initial_particles(&self, rng: &mut ChaCha8Rng) -> Result<ParticleSet> {
        let cfg = &self.config;
        let start = self.mission.start_state().pose;
        let yaw_range = match cfg.mode {
            Mode::Localization => 0.0..=std::f64::consts::TAU,
            Mode::Tracking => start.yaw - cfg.yaw_perturbation..=start.yaw + cfg.yaw_perturbation,
        };
        ParticleSet::init_uniform_disc(&start, cfg.radius(), cfg.particle_count(), yaw_range, rng)
    }

    /// One seed against an arbitrary frame source.
    ///
    /// Per control tick: advance the truth, feed the noisy odometry to
    /// `predict`; on each sonar frame apply the detector update (and the
    /// region update when enabled), then resample if ESS is low; on each
    /// whole metre travelled, score the current estimate.
    pub fn run_with_frontend<F: Frontend + ?Sized>(
        &self,
        seed: u64,
        frontend: &mut F,
        keep_snapshots: bool,
    ) -> Result<RunMetrics> {
        let started = Instant::now();
        let cfg = &self.config;
        let mut filter_rng = seeded_rng(seed, FILTER_STREAM);
        let mut odo_rng = seeded_rng(seed, ODOMETRY_STREAM);
        let mut set = self.initial_particles(&mut filter_rng)?;

        let dt = self.mission.dt();
        let frame_period = 1.0 / cfg.mission.sonar_rate_hz;
        let max_time = cfg.max_time.unwrap_or(f64::INFINITY);
        let mut truth = self.mission.start_state();
        let mut frames = 0u64;
        let mut samples = Vec::new();
        let mut snapshots = Vec::new();

        loop {
            let aborted = truth.time >= max_time;
            if !aborted && truth.time + 1e-9 >= frames as f64 * frame_period {
                let frame = frontend.observe(&truth.pose, truth.time);
                if let Some(det) = &frame.detection {
                    set.update_sad(det, &self.map, &cfg.sonar, &cfg.filter)?;
                }
                if cfg.frontends.uses_prec() {
                    set.update_prec(&frame.region, &self.map, &cfg.sonar, &cfg.filter)?;
                }
                set.resample_if_degenerate(cfg.filter.resample_threshold, &mut filter_rng)?;
                frames += 1;
            }
            if aborted || self.mission.is_finished(&truth) {
                break;
            }
            let (next, control) = step_truth(&truth, &self.mission, dt);
            let odometry = cfg.odometry.corrupt(&control, &mut odo_rng);
            set.predict(&odometry, &cfg.filter.motion, &mut filter_rng)?;
            let marks = meter_marks(truth.distance, next.distance);
            truth = next;
            for meter in marks {
                let est = set.estimate();
                samples.push(MeterSample {
                    meter,
                    time: truth.time,
                    truth: truth.pose,
                    estimate: est.pose,
                    position_error: est.pose.distance_to(&truth.pose),
                    yaw_error: angle_diff(est.pose.yaw, truth.pose.yaw).abs(),
                    ess: set.effective_sample_size(),
                });
                if keep_snapshots && meter % cfg.snapshot_every_m == 0 {
                    snapshots.push((meter, set.clone()));
                }
            }
        }

        let est = set.estimate();
        let final_position_error = est.pose.distance_to(&truth.pose);
        let final_yaw_error = angle_diff(est.pose.yaw, truth.pose.yaw).abs();
        let converged =
            !samples.is_empty() && cfg.success.accepts(final_position_error, final_yaw_error);
        Ok(RunMetrics {
            seed,
            samples,
            final_position_error,
            final_yaw_error,
            final_spread: est.position_spread(),
            converged,
            distance: truth.distance,
            wall_clock_s: started.elapsed().as_secs_f64(),
            snapshots,
        })
    }
}

/// Runs every seed of `config`, in parallel, returning metrics in seed order.
pub fn run_experiment(config: &ExperimentConfig, keep_snapshots: bool) -> Result<Vec<RunMetrics>> {
    let exp = Experiment::prepare(config.clone())?;
    exp.config
        .seeds
        .par_iter()
        .map(|&seed| exp.run_seed(seed, keep_snapshots))
        .collect()
}
