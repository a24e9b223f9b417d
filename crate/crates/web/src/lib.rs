//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three views are exported: the sonar projection of a single asset, the
//! detector likelihood over the plane, and a stepped localization mission.

use std::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use sonarloc::angle::angle_diff;
use sonarloc::filter::ParticleSet;
use sonarloc::frontend::{emulate_prec, emulate_sad, ObbDetection};
use sonarloc::harness::{
    seeded_rng, Experiment, ExperimentConfig, Frontends, FILTER_STREAM, FRONTEND_STREAM,
    ODOMETRY_STREAM,
};
use sonarloc::mission::{step_truth, GroundTruthState};
use sonarloc::sonar::project_point;
use sonarloc::world::{asset_obb_in_image, AssetPose, Pose2};
use sonarloc::{filter::obb_distance, Point3, SonarParams};
use wasm_bindgen::prelude::*;

/// The lone asset used by the projection and heatmap views.
pub fn demo_asset() -> AssetPose {
    AssetPose {
        id: 0,
        pose: Pose2::new(0.0, 0.0, 0.5),
        half_length: 3.0,
        half_width: 1.5,
        symmetric: false,
    }
}

/// `[beta, width, height, r_max, fov]` of the default sonar.
#[wasm_bindgen]
pub fn sonar_info() -> Vec<f64> {
    let p = SonarParams::default();
    vec![
        p.beta(),
        p.width() as f64,
        p.height() as f64,
        p.r_max(),
        p.fov(),
    ]
}

/// Image of the demo asset seen from a sensor pose:
/// `[u, v, rotation, range, c0u, c0v, .., c3u, c3v]`, or empty when the
/// asset centre is outside the fan.
#[wasm_bindgen]
pub fn project_asset(x: f64, y: f64, yaw: f64) -> Vec<f64> {
    let params = SonarParams::default();
    let asset = demo_asset();
    let sensor = Pose2::new(x, y, yaw);
    let Some(view) = asset_obb_in_image(&sensor, &asset, &params) else {
        return Vec::new();
    };
    let mut out = vec![view.center.u, view.center.v, view.rotation, view.range];
    let (hl, hw) = (asset.half_length, asset.half_width);
    for (cx, cy) in [(hl, hw), (hl, -hw), (-hl, -hw), (-hl, hw)] {
        let (wx, wy) = asset.pose.transform_point(cx, cy);
        let (sx, sy) = sensor.inverse().transform_point(wx, wy);
        match project_point(Point3::new(sx, sy, 0.0), &params) {
            Ok(c) => out.extend([c.u, c.v]),
            Err(_) => out.extend([f64::NAN, f64::NAN]),
        }
    }
    out
}

/// Detector likelihood `exp(−dist)` on an `n × n` grid spanning
/// `[−extent, extent]²` around the demo asset, maximised over `yaw_steps`
/// headings. The observation is the noiseless box seen from the truth pose.
/// Row-major from the top-left (max y) corner; empty if the truth pose does
/// not see the asset.
#[wasm_bindgen]
pub fn sad_heatmap(
    tx: f64,
    ty: f64,
    tyaw: f64,
    n: usize,
    extent: f64,
    yaw_steps: usize,
) -> Vec<f64> {
    let params = SonarParams::default();
    let config = sonarloc::FilterConfig::default();
    let asset = demo_asset();
    let Some(obs) = asset_obb_in_image(&Pose2::new(tx, ty, tyaw), &asset, &params) else {
        return Vec::new();
    };
    let cell = 2.0 * extent / n as f64;
    let yaw_steps = yaw_steps.max(1);
    let mut out = Vec::with_capacity(n * n);
    for row in 0..n {
        let y = extent - (row as f64 + 0.5) * cell;
        for col in 0..n {
            let x = -extent + (col as f64 + 0.5) * cell;
            let best = (0..yaw_steps)
                .map(|k| {
                    let pose = Pose2::new(x, y, TAU * k as f64 / yaw_steps as f64);
                    match asset_obb_in_image(&pose, &asset, &params) {
                        Some(v) => obb_distance(
                            config.eta,
                            &v.center,
                            v.rotation,
                            &obs.center,
                            obs.rotation,
                        )
                        .min(config.max_dist),
                        None => config.max_dist,
                    }
                })
                .fold(f64::INFINITY, f64::min);
            out.push((-best).exp());
        }
    }
    out
}

/// A lost-robot run on the built-in plant, advanced a few control ticks at
/// a time.
#[wasm_bindgen]
pub struct MissionDemo {
    exp: Experiment,
    set: ParticleSet,
    truth: GroundTruthState,
    frames: u64,
    filter_rng: ChaCha8Rng,
    frontend_rng: ChaCha8Rng,
    odo_rng: ChaCha8Rng,
    last_detection: Option<ObbDetection>,
}

#[wasm_bindgen]
impl MissionDemo {
    #[wasm_bindgen(constructor)]
    pub fn new(
        mission_id: u8,
        use_prec: bool,
        particles: usize,
        seed: u32,
    ) -> Result<MissionDemo, JsError> {
        let frontends = if use_prec {
            Frontends::SadPrec
        } else {
            Frontends::Sad
        };
        let mut config = ExperimentConfig::localization(mission_id, frontends, vec![seed as u64]);
        config.particles = Some(particles);
        let exp = Experiment::prepare(config)?;
        let mut filter_rng = seeded_rng(seed as u64, FILTER_STREAM);
        let truth = exp.mission.start_state();
        let set = ParticleSet::init_uniform_disc(
            &truth.pose,
            exp.config.radius(),
            exp.config.particle_count(),
            0.0..=TAU,
            &mut filter_rng,
        )?;
        Ok(MissionDemo {
            frontend_rng: seeded_rng(seed as u64, FRONTEND_STREAM),
            odo_rng: seeded_rng(seed as u64, ODOMETRY_STREAM),
            exp,
            set,
            truth,
            frames: 0,
            filter_rng,
            last_detection: None,
        })
    }

    /// Advances up to `ticks` control steps. Returns true once the mission
    /// has ended.
    pub fn step(&mut self, ticks: u32) -> Result<bool, JsError> {
        let cfg = &self.exp.config;
        let frame_period = 1.0 / cfg.mission.sonar_rate_hz;
        for _ in 0..ticks {
            if self.truth.time + 1e-9 >= self.frames as f64 * frame_period {
                let (pose, t) = (self.truth.pose, self.truth.time);
                let det = emulate_sad(
                    &pose,
                    t,
                    &self.exp.map,
                    &cfg.sonar,
                    &cfg.detector,
                    &mut self.frontend_rng,
                );
                let region = emulate_prec(
                    &pose,
                    t,
                    &self.exp.map,
                    &cfg.sonar,
                    &cfg.detector,
                    &mut self.frontend_rng,
                );
                if let Some(det) = &det {
                    self.set
                        .update_sad(det, &self.exp.map, &cfg.sonar, &cfg.filter)?;
                }
                if cfg.frontends.uses_prec() {
                    self.set
                        .update_prec(&region, &self.exp.map, &cfg.sonar, &cfg.filter)?;
                }
                self.set
                    .resample_if_degenerate(cfg.filter.resample_threshold, &mut self.filter_rng)?;
                self.last_detection = det;
                self.frames += 1;
            }
            if self.exp.mission.is_finished(&self.truth) {
                return Ok(true);
            }
            let (next, control) = step_truth(&self.truth, &self.exp.mission, self.exp.mission.dt());
            let odometry = cfg.odometry.corrupt(&control, &mut self.odo_rng);
            self.set
                .predict(&odometry, &cfg.filter.motion, &mut self.filter_rng)?;
            self.truth = next;
        }
        Ok(self.exp.mission.is_finished(&self.truth))
    }

    /// Flat `[x, y, yaw, weight]` per particle.
    pub fn particles(&self) -> Vec<f64> {
        self.set
            .particles()
            .iter()
            .flat_map(|p| [p.pose.x, p.pose.y, p.pose.yaw, p.weight])
            .collect()
    }

    /// `[x, y, yaw]` of the vehicle.
    pub fn truth(&self) -> Vec<f64> {
        let p = self.truth.pose;
        vec![p.x, p.y, p.yaw]
    }

    /// `[x, y, yaw, position error, yaw error]` of the weighted mean.
    pub fn estimate(&self) -> Vec<f64> {
        let e = self.set.estimate().pose;
        let t = self.truth.pose;
        vec![
            e.x,
            e.y,
            e.yaw,
            e.distance_to(&t),
            angle_diff(e.yaw, t.yaw).abs(),
        ]
    }

    /// Flat `[x, y, yaw, half_length, half_width]` per asset.
    pub fn assets(&self) -> Vec<f64> {
        self.exp
            .map
            .assets()
            .iter()
            .flat_map(|a| [a.pose.x, a.pose.y, a.pose.yaw, a.half_length, a.half_width])
            .collect()
    }

    /// Planned path as flat `[x, y]` pairs.
    pub fn path(&self) -> Vec<f64> {
        self.exp
            .mission
            .spec()
            .waypoints
            .iter()
            .flat_map(|w| [w.x, w.y])
            .collect()
    }

    /// Id of the asset in the latest detection, or −1.
    pub fn detected_asset(&self) -> i32 {
        self.last_detection.map_or(-1, |d| d.asset_id as i32)
    }

    pub fn distance(&self) -> f64 {
        self.truth.distance
    }

    pub fn effective_sample_size(&self) -> f64 {
        self.set.effective_sample_size()
    }
}

/// Heading that points the sonar straight at the demo asset from `(x, y)`.
#[wasm_bindgen]
pub fn facing_yaw(x: f64, y: f64) -> f64 {
    let a = demo_asset().pose;
    (a.y - y).atan2(a.x - x)
}
