//! Ground-truth inspection missions.
//!
//! A mission is a polyline of waypoints followed at constant speed. On
//! inspection legs the vehicle keeps its bow pointed at the asset centre;
//! elsewhere the heading is interpolated between waypoint headings.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::angle::angle_diff;
use crate::error::{Error, Result};
use crate::filter::ControlInput;
use crate::world::{quadrant_of_bearing, AssetPose, Pose2, WorldMap};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
    /// Point to keep facing on the leg that ends at this waypoint.
    #[serde(default)]
    pub face: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionSpec {
    pub mission_id: u8,
    pub waypoints: Vec<Waypoint>,
    pub standoff: f64,
    pub speed: f64,
    pub control_rate_hz: f64,
}

/// Mission knobs exposed through the experiment config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MissionOptions {
    pub standoff: f64,
    pub speed: f64,
    pub control_rate_hz: f64,
    pub sonar_rate_hz: f64,
    /// Assets to inspect instead of the default pick.
    pub assets: Option<Vec<usize>>,
    /// Replaces the generated path entirely.
    pub waypoints: Option<Vec<Waypoint>>,
}

impl Default for MissionOptions {
    fn default() -> Self {
        MissionOptions {
            standoff: 10.0,
            speed: 0.5,
            control_rate_hz: 5.0,
            sonar_rate_hz: 2.0,
            assets: None,
            waypoints: None,
        }
    }
}

impl MissionOptions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("standoff", self.standoff),
            ("speed", self.speed),
            ("control_rate_hz", self.control_rate_hz),
            ("sonar_rate_hz", self.sonar_rate_hz),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "mission.{name} must be > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Square loop at `standoff` around an asset, aligned with the asset's axes:
/// edge midpoint, corner, midpoint, … back to the starting midpoint. Nine
/// waypoints, eight distinct poses.
pub fn inspection_loop(asset: &AssetPose, standoff: f64, start_quadrant: u8) -> Vec<Waypoint> {
    let mid = |m: u8| {
        let a = f64::from(m % 4) * FRAC_PI_2;
        (standoff * a.cos(), standoff * a.sin())
    };
    let centre = [asset.pose.x, asset.pose.y];
    (0..=8u8)
        .map(|i| {
            let m = start_quadrant + i / 2;
            let (lx, ly) = if i % 2 == 0 {
                mid(m)
            } else {
                let (ax, ay) = mid(m);
                let (bx, by) = mid(m + 1);
                (ax + bx, ay + by)
            };
            let (x, y) = asset.pose.transform_point(lx, ly);
            Waypoint {
                x,
                y,
                yaw: (centre[1] - y).atan2(centre[0] - x),
                face: Some(centre),
            }
        })
        .collect()
}

fn closest_pair(map: &WorldMap) -> Option<(usize, usize)> {
    let assets = map.assets();
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, a) in assets.iter().enumerate() {
        for b in &assets[i + 1..] {
            let d = a.pose.distance_to(&b.pose);
            if best.is_none_or(|(bd, _, _)| d < bd) {
                best = Some((d, a.id, b.id));
            }
        }
    }
    best.map(|(_, a, b)| (a, b))
}

fn pick_isolated(map: &WorldMap, symmetric: bool) -> Option<usize> {
    let pair = closest_pair(map);
    let in_pair = |id| pair.is_some_and(|(a, b)| a == id || b == id);
    let matching = || map.assets().iter().filter(|a| a.symmetric == symmetric);
    matching()
        .find(|a| !in_pair(a.id))
        .or_else(|| matching().next())
        .map(|a| a.id)
}

fn start_quadrant_towards(from: &AssetPose, to: &AssetPose) -> u8 {
    let local = from.pose.between(&to.pose);
    quadrant_of_bearing(local.y.atan2(local.x))
}

/// Builds one of the three inspection missions.
///
/// 1. Two neighbouring assets, one loop each, joined by a short transit.
/// 2. One loop around an isolated asset without rotational symmetry.
/// 3. One loop around an isolated symmetric asset.
pub fn build_mission(mission_id: u8, map: &WorldMap, opts: &MissionOptions) -> Result<MissionSpec> {
    opts.validate()?;
    let spec = |waypoints| MissionSpec {
        mission_id,
        waypoints,
        standoff: opts.standoff,
        speed: opts.speed,
        control_rate_hz: opts.control_rate_hz,
    };
    if let Some(wps) = &opts.waypoints {
        return Ok(spec(wps.clone()));
    }
    let explicit = opts.assets.as_deref();
    let missing = |what: &str| Error::Mission(format!("mission {mission_id} needs {what}"));
    let waypoints = match mission_id {
        1 => {
            let (a, b) = match explicit {
                Some([a, b, ..]) => (*a, *b),
                Some(_) => return Err(missing("two asset ids")),
                None => closest_pair(map).ok_or_else(|| missing("two assets"))?,
            };
            let (a, b) = (map.asset(a)?, map.asset(b)?);
            let mut wps = inspection_loop(a, opts.standoff, start_quadrant_towards(a, b));
            let mut second = inspection_loop(b, opts.standoff, start_quadrant_towards(b, a));
            // The transit leg into the second loop turns freely.
            second[0].face = None;
            wps.extend(second);
            wps
        }
        2 | 3 => {
            let id = match explicit {
                Some([id, ..]) => *id,
                Some(_) => return Err(missing("an asset id")),
                None => pick_isolated(map, mission_id == 3).ok_or_else(|| {
                    missing(if mission_id == 3 {
                        "a symmetric asset"
                    } else {
                        "an asymmetric asset"
                    })
                })?,
            };
            inspection_loop(map.asset(id)?, opts.standoff, 0)
        }
        other => return Err(Error::Mission(format!("unknown mission id {other}"))),
    };
    Ok(spec(waypoints))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruthState {
    pub pose: Pose2,
    pub time: f64,
    /// Arc length travelled along the path, metres.
    pub distance: f64,
}

/// A validated mission with precomputed arc lengths.
#[derive(Debug, Clone)]
pub struct Mission {
    spec: MissionSpec,
    cumulative: Vec<f64>,
}

impl Mission {
    pub fn new(spec: MissionSpec) -> Result<Self> {
        if spec.waypoints.len() < 2 {
            return Err(Error::Mission(
                "a mission needs at least two waypoints".into(),
            ));
        }
        if !(spec.speed > 0.0 && spec.speed.is_finite()) {
            return Err(Error::Mission(format!(
                "speed must be > 0, got {}",
                spec.speed
            )));
        }
        if !(spec.control_rate_hz > 0.0) {
            return Err(Error::Mission("control rate must be > 0".into()));
        }
        let mut cumulative = Vec::with_capacity(spec.waypoints.len());
        let mut total = 0.0;
        cumulative.push(0.0);
        for w in spec.waypoints.windows(2) {
            total += (w[1].x - w[0].x).hypot(w[1].y - w[0].y);
            cumulative.push(total);
        }
        Ok(Mission { spec, cumulative })
    }

    pub fn spec(&self) -> &MissionSpec {
        &self.spec
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.spec.control_rate_hz
    }

    /// Pose after travelling `s` metres along the path (clamped to the ends).
    pub fn pose_at(&self, s: f64) -> Pose2 {
        let s = s.clamp(0.0, self.total_length());
        let wps = &self.spec.waypoints;
        // First leg whose end lies at or beyond s, skipping zero-length legs.
        let leg = self.cumulative[1..]
            .partition_point(|&end| end < s)
            .min(wps.len() - 2);
        let (a, b) = (&wps[leg], &wps[leg + 1]);
        let len = self.cumulative[leg + 1] - self.cumulative[leg];
        let frac = if len > 0.0 {
            ((s - self.cumulative[leg]) / len).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let x = a.x + frac * (b.x - a.x);
        let y = a.y + frac * (b.y - a.y);
        let yaw = match b.face {
            Some([fx, fy]) if (fx - x).hypot(fy - y) > 1e-9 => (fy - y).atan2(fx - x),
            _ => a.yaw + frac * angle_diff(b.yaw, a.yaw),
        };
        Pose2::new(x, y, yaw)
    }

    /// Whether the path segment at `s` is an asset-facing leg.
    pub fn facing_target_at(&self, s: f64) -> Option<[f64; 2]> {
        let s = s.clamp(0.0, self.total_length());
        let leg = self.cumulative[1..]
            .partition_point(|&end| end < s)
            .min(self.spec.waypoints.len() - 2);
        self.spec.waypoints[leg + 1].face
    }

    pub fn start_state(&self) -> GroundTruthState {
        GroundTruthState {
            pose: self.pose_at(0.0),
            time: 0.0,
            distance: 0.0,
        }
    }

    pub fn is_finished(&self, state: &GroundTruthState) -> bool {
        state.distance >= self.total_length()
    }

    /// Ground-truth `(time, pose)` at every control tick, start and end included.
    pub fn trajectory(&self) -> Vec<(f64, Pose2)> {
        let mut state = self.start_state();
        let mut out = vec![(state.time, state.pose)];
        while !self.is_finished(&state) {
            state = step_truth(&state, self, self.dt()).0;
            out.push((state.time, state.pose));
        }
        out
    }
}

/// Advances the true vehicle by `dt` and returns the exact body-frame
/// control that realizes the step under the constant-velocity model.
pub fn step_truth(
    state: &GroundTruthState,
    mission: &Mission,
    dt: f64,
) -> (GroundTruthState, ControlInput) {
    let distance = (state.distance + mission.spec.speed * dt).min(mission.total_length());
    let distance = distance.max(state.distance);
    let pose = mission.pose_at(distance);
    let step = state.pose.between(&pose);
    let control = ControlInput {
        vx: step.x / dt,
        vy: step.y / dt,
        yaw_rate: angle_diff(pose.yaw, state.pose.yaw) / dt,
        dt,
    };
    (
        GroundTruthState {
            pose,
            time: state.time + dt,
            distance,
        },
        control,
    )
}

/// Whole metres crossed when the odometer moves from `prev` to `next`. A
/// reading within 1e-9 m of a mark counts as reaching it.
pub fn meter_marks(prev: f64, next: f64) -> std::ops::RangeInclusive<u64> {
    let whole = |d: f64| (d.max(0.0) + METER_EPS).floor() as u64;
    whole(prev) + 1..=whole(next)
}

const METER_EPS: f64 = 1e-9;

/// Number of per-metre samples a run over `distance` metres produces.
pub fn meter_count(distance: f64) -> u64 {
    (distance.max(0.0) + METER_EPS).floor() as u64
}

/// Additive Gaussian noise on the control handed to the filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OdometryNoise {
    /// m/s, applied to each body-frame velocity component.
    pub velocity_sigma: f64,
    /// rad/s.
    pub yaw_rate_sigma: f64,
}

impl Default for OdometryNoise {
    fn default() -> Self {
        OdometryNoise {
            velocity_sigma: 0.02,
            yaw_rate_sigma: 0.005,
        }
    }
}

impl OdometryNoise {
    pub fn validate(&self) -> Result<()> {
        if !(self.velocity_sigma >= 0.0 && self.yaw_rate_sigma >= 0.0) {
            return Err(Error::Config("odometry sigmas must be >= 0".into()));
        }
        Ok(())
    }

    pub fn corrupt<R: Rng + ?Sized>(&self, u: &ControlInput, rng: &mut R) -> ControlInput {
        let mut draw = |sigma: f64| {
            if sigma > 0.0 {
                Normal::new(0.0, sigma).expect("validated").sample(rng)
            } else {
                0.0
            }
        };
        ControlInput {
            vx: u.vx + draw(self.velocity_sigma),
            vy: u.vy + draw(self.velocity_sigma),
            yaw_rate: u.yaw_rate + draw(self.yaw_rate_sigma),
            dt: u.dt,
        }
    }
}
