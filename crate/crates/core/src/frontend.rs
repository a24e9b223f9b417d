//! Emulated sonar frontends.
//!
//! The asset detector (SAD) reports one oriented box per frame; place
//! recognition (PRec) reports which quadrant around which asset is in view,
//! or nothing. Both are generated from ground truth and a [`DetectorNoise`]
//! model. Anything implementing [`Frontend`] can stand in for them, for
//! instance a [`ReplayFrontend`] fed from a recorded CSV stream.

use std::collections::VecDeque;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::angle::normalize_angle;
use crate::error::{Error, Result};
use crate::sonar::{PixelCoord, SonarParams};
use crate::world::{asset_obb_in_image, region_of, AssetPose, ObbView, Pose2, RegionId, WorldMap};

/// Decoded SAD output: which asset, where its box centre is, how it is rotated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObbDetection {
    pub asset_id: usize,
    pub center: PixelCoord,
    pub rotation: f64,
    pub timestamp: f64,
}

/// Decoded PRec output. `region == None` is the "nothing in view" class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionObservation {
    pub region: Option<RegionId>,
    pub timestamp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorNoise {
    /// Std-dev of the box centre, pixels.
    pub pixel_sigma: f64,
    /// Std-dev of the box rotation, radians.
    pub rotation_sigma: f64,
    pub miss_rate: f64,
    /// Chance a symmetric asset is reported rotated by π.
    pub flip_rate: f64,
    /// Chance PRec reports a quadrant adjacent to the true one.
    pub region_confusion_rate: f64,
}

impl Default for DetectorNoise {
    fn default() -> Self {
        DetectorNoise {
            pixel_sigma: 5.0,
            rotation_sigma: 0.05,
            miss_rate: 0.1,
            flip_rate: 0.5,
            region_confusion_rate: 0.05,
        }
    }
}

impl DetectorNoise {
    pub fn noiseless() -> Self {
        DetectorNoise {
            pixel_sigma: 0.0,
            rotation_sigma: 0.0,
            miss_rate: 0.0,
            flip_rate: 0.0,
            region_confusion_rate: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("miss_rate", self.miss_rate),
            ("flip_rate", self.flip_rate),
            ("region_confusion_rate", self.region_confusion_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        for (name, s) in [
            ("pixel_sigma", self.pixel_sigma),
            ("rotation_sigma", self.rotation_sigma),
        ] {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::Config(format!("{name} must be >= 0, got {s}")));
            }
        }
        Ok(())
    }
}

/// The asset whose box would dominate the frame: the nearest one that is
/// inside the fan and the image.
pub fn nearest_visible_asset<'m>(
    pose: &Pose2,
    map: &'m WorldMap,
    params: &SonarParams,
) -> Option<(&'m AssetPose, ObbView)> {
    map.assets()
        .iter()
        .filter_map(|a| asset_obb_in_image(pose, a, params).map(|v| (a, v)))
        .min_by(|a, b| a.1.range.total_cmp(&b.1.range))
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    if sigma > 0.0 {
        Normal::new(0.0, sigma)
            .expect("sigma validated")
            .sample(rng)
    } else {
        0.0
    }
}

fn chance<R: Rng + ?Sized>(rng: &mut R, p: f64) -> bool {
    p > 0.0 && rng.random::<f64>() < p
}

/// Emulates one asset-detector frame.
pub fn emulate_sad<R: Rng + ?Sized>(
    true_pose: &Pose2,
    timestamp: f64,
    map: &WorldMap,
    params: &SonarParams,
    noise: &DetectorNoise,
    rng: &mut R,
) -> Option<ObbDetection> {
    let (asset, view) = nearest_visible_asset(true_pose, map, params)?;
    detect_view(asset, &view, timestamp, noise, rng)
}

fn detect_view<R: Rng + ?Sized>(
    asset: &AssetPose,
    view: &ObbView,
    timestamp: f64,
    noise: &DetectorNoise,
    rng: &mut R,
) -> Option<ObbDetection> {
    if chance(rng, noise.miss_rate) {
        return None;
    }
    let center = PixelCoord::new(
        view.center.u + gaussian(rng, noise.pixel_sigma),
        view.center.v + gaussian(rng, noise.pixel_sigma),
    );
    let mut rotation = normalize_angle(view.rotation + gaussian(rng, noise.rotation_sigma));
    if asset.symmetric && chance(rng, noise.flip_rate) {
        rotation = flip(rotation);
    }
    Some(ObbDetection {
        asset_id: asset.id,
        center,
        rotation,
        timestamp,
    })
}

/// Rotates a box angle by half a turn.
pub fn flip(rotation: f64) -> f64 {
    normalize_angle(rotation + std::f64::consts::PI)
}

/// Emulates one place-recognition frame.
pub fn emulate_prec<R: Rng + ?Sized>(
    true_pose: &Pose2,
    timestamp: f64,
    map: &WorldMap,
    params: &SonarParams,
    noise: &DetectorNoise,
    rng: &mut R,
) -> RegionObservation {
    let region = nearest_visible_asset(true_pose, map, params)
        .and_then(|(asset, _)| classify_region(true_pose, asset, noise, rng));
    RegionObservation { region, timestamp }
}

fn classify_region<R: Rng + ?Sized>(
    pose: &Pose2,
    asset: &AssetPose,
    noise: &DetectorNoise,
    rng: &mut R,
) -> Option<RegionId> {
    let mut region = region_of(pose, asset).ok()?;
    if chance(rng, noise.region_confusion_rate) {
        let step = if rng.random::<bool>() { 1 } else { 3 };
        region.quadrant = (region.quadrant + step) % 4;
    }
    Some(region)
}

/// Both frontends applied to the same sonar frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SonarFrame {
    pub timestamp: f64,
    pub detection: Option<ObbDetection>,
    pub region: RegionObservation,
}

/// Source of decoded sonar frames.
pub trait Frontend {
    /// Produces the frame captured at `timestamp` by a sensor at `true_pose`.
    /// Replay sources are free to ignore the pose.
    fn observe(&mut self, true_pose: &Pose2, timestamp: f64) -> SonarFrame;
}

/// Ground-truth driven frontend pair with its own RNG.
pub struct EmulatedFrontend<'m, R> {
    map: &'m WorldMap,
    params: SonarParams,
    noise: DetectorNoise,
    rng: R,
}

impl<'m, R: Rng> EmulatedFrontend<'m, R> {
    pub fn new(map: &'m WorldMap, params: SonarParams, noise: DetectorNoise, rng: R) -> Self {
        Self {
            map,
            params,
            noise,
            rng,
        }
    }
}

impl<R: Rng> Frontend for EmulatedFrontend<'_, R> {
    fn observe(&mut self, true_pose: &Pose2, timestamp: f64) -> SonarFrame {
        // One visibility query shared by both networks.
        let visible = nearest_visible_asset(true_pose, self.map, &self.params);
        let detection = visible.and_then(|(asset, view)| {
            detect_view(asset, &view, timestamp, &self.noise, &mut self.rng)
        });
        let region = visible
            .and_then(|(asset, _)| classify_region(true_pose, asset, &self.noise, &mut self.rng));
        SonarFrame {
            timestamp,
            detection,
            region: RegionObservation { region, timestamp },
        }
    }
}

/// Plays back a recorded stream in order; yields empty frames once exhausted.
#[derive(Debug, Clone, Default)]
pub struct ReplayFrontend {
    frames: VecDeque<SonarFrame>,
}

impl ReplayFrontend {
    pub fn new(frames: impl IntoIterator<Item = SonarFrame>) -> Self {
        Self {
            frames: frames.into_iter().collect(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.frames.len()
    }
}

impl Frontend for ReplayFrontend {
    fn observe(&mut self, _true_pose: &Pose2, timestamp: f64) -> SonarFrame {
        self.frames.pop_front().unwrap_or(SonarFrame {
            timestamp,
            detection: None,
            region: RegionObservation {
                region: None,
                timestamp,
            },
        })
    }
}

/// Pose at time `t` along a timestamped trajectory, interpolated linearly
/// (yaw along the shorter arc). `t` must lie within the trajectory.
fn interpolate(trajectory: &[(f64, Pose2)], t: f64) -> Pose2 {
    let idx = trajectory.partition_point(|(ts, _)| *ts <= t);
    if idx == 0 {
        return trajectory[0].1;
    }
    if idx == trajectory.len() {
        return trajectory[idx - 1].1;
    }
    let (t0, a) = trajectory[idx - 1];
    let (t1, b) = trajectory[idx];
    let s = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
    Pose2::new(
        a.x + s * (b.x - a.x),
        a.y + s * (b.y - a.y),
        a.yaw + s * crate::angle::angle_diff(b.yaw, a.yaw),
    )
}

/// Samples frames at a fixed rate along a ground-truth trajectory.
///
/// Frames fall at `t0, t0 + 1/rate, …` strictly before the last trajectory
/// timestamp.
pub fn detection_stream<F: Frontend + ?Sized>(
    trajectory: &[(f64, Pose2)],
    rate_hz: f64,
    frontend: &mut F,
) -> Result<Vec<SonarFrame>> {
    if !(rate_hz > 0.0 && rate_hz.is_finite()) {
        return Err(Error::Config(format!(
            "stream rate must be > 0, got {rate_hz}"
        )));
    }
    let (Some(first), Some(last)) = (trajectory.first(), trajectory.last()) else {
        return Ok(Vec::new());
    };
    let (t0, t_end) = (first.0, last.0);
    let mut frames = Vec::new();
    for k in 0u64.. {
        let t = t0 + k as f64 / rate_hz;
        if t >= t_end {
            break;
        }
        frames.push(frontend.observe(&interpolate(trajectory, t), t));
    }
    Ok(frames)
}

#[derive(Debug, Serialize, Deserialize)]
struct StreamRecord {
    t: f64,
    j: Option<usize>,
    u: Option<f64>,
    v: Option<f64>,
    delta: Option<f64>,
    region_asset: Option<usize>,
    region_quadrant: Option<u8>,
}

pub fn write_stream_csv(path: impl AsRef<Path>, frames: &[SonarFrame]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    for f in frames {
        let d = f.detection;
        w.serialize(StreamRecord {
            t: f.timestamp,
            j: d.map(|d| d.asset_id),
            u: d.map(|d| d.center.u),
            v: d.map(|d| d.center.v),
            delta: d.map(|d| d.rotation),
            region_asset: f.region.region.map(|r| r.asset_id),
            region_quadrant: f.region.region.map(|r| r.quadrant),
        })
        .map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_stream_csv(path: impl AsRef<Path>) -> Result<Vec<SonarFrame>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let mut frames = Vec::new();
    for rec in r.deserialize::<StreamRecord>() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let detection = match (rec.j, rec.u, rec.v, rec.delta) {
            (Some(asset_id), Some(u), Some(v), Some(rotation)) => Some(ObbDetection {
                asset_id,
                center: PixelCoord::new(u, v),
                rotation,
                timestamp: rec.t,
            }),
            (None, None, None, None) => None,
            _ => {
                return Err(Error::Config(format!(
                    "{}: partial detection at t={}",
                    path.display(),
                    rec.t
                )))
            }
        };
        let region = match (rec.region_asset, rec.region_quadrant) {
            (Some(a), Some(q)) => Some(RegionId::new(a, q)?),
            (None, None) => None,
            _ => {
                return Err(Error::Config(format!(
                    "{}: partial region at t={}",
                    path.display(),
                    rec.t
                )))
            }
        };
        frames.push(SonarFrame {
            timestamp: rec.t,
            detection,
            region: RegionObservation {
                region,
                timestamp: rec.t,
            },
        });
    }
    Ok(frames)
}

/// Sensor poses used to sweep a detector around one asset: a square grid of
/// positions, each with a view straight at the asset and two views offset by
/// ±`side_angle`. Positions inside `clearance` metres of the asset centre are
/// dropped as collisions.
pub fn grid_views(
    asset: &AssetPose,
    half_extent: f64,
    spacing: f64,
    clearance: f64,
    side_angle: f64,
) -> Vec<Pose2> {
    let steps = (half_extent / spacing).floor() as i64;
    let mut poses = Vec::new();
    for i in -steps..=steps {
        for j in -steps..=steps {
            let (x, y) = asset
                .pose
                .transform_point(i as f64 * spacing, j as f64 * spacing);
            let dx = asset.pose.x - x;
            let dy = asset.pose.y - y;
            if dx.hypot(dy) < clearance {
                continue;
            }
            let facing = dy.atan2(dx);
            for offset in [0.0, side_angle, -side_angle] {
                poses.push(Pose2::new(x, y, facing + offset));
            }
        }
    }
    poses
}
