//! Sparse asset map, SE(2) poses and the per-asset region partition.
//!
//! Vehicle and sonar frames coincide: the sonar sits at the vehicle origin
//! looking along +x. Altitude, roll and pitch are held fixed, so everything
//! here lives in the plane.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::angle::normalize_angle;
use crate::error::{Error, Result};
use crate::sonar::{project_point, PixelCoord, Point3, SonarParams};

/// Planar rigid transform / vehicle pose. Yaw is kept in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, yaw: f64) -> Self {
        Self {
            x,
            y,
            yaw: normalize_angle(yaw),
        }
    }

    pub const fn identity() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            yaw: 0.0,
        }
    }

    /// `self ∘ other`: `other` expressed in `self`'s frame, mapped to the parent.
    pub fn compose(&self, other: &Pose2) -> Pose2 {
        let (s, c) = self.yaw.sin_cos();
        Pose2::new(
            self.x + c * other.x - s * other.y,
            self.y + s * other.x + c * other.y,
            self.yaw + other.yaw,
        )
    }

    pub fn inverse(&self) -> Pose2 {
        let (s, c) = self.yaw.sin_cos();
        Pose2::new(
            -(c * self.x + s * self.y),
            s * self.x - c * self.y,
            -self.yaw,
        )
    }

    /// `self⁻¹ ∘ other`.
    pub fn between(&self, other: &Pose2) -> Pose2 {
        let (s, c) = self.yaw.sin_cos();
        let dx = other.x - self.x;
        let dy = other.y - self.y;
        Pose2::new(c * dx + s * dy, -s * dx + c * dy, other.yaw - self.yaw)
    }

    /// Maps a point from this pose's local frame into the parent frame.
    pub fn transform_point(&self, px: f64, py: f64) -> (f64, f64) {
        let (s, c) = self.yaw.sin_cos();
        (self.x + c * px - s * py, self.y + s * px + c * py)
    }

    pub fn distance_to(&self, other: &Pose2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// An asset's placement `L_j` together with its rectangular footprint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetPose {
    pub id: usize,
    pub pose: Pose2,
    pub half_length: f64,
    pub half_width: f64,
    /// The sonar signature looks the same from opposite sides.
    pub symmetric: bool,
}

/// Axis-aligned world rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Bounds {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl From<[f64; 4]> for Bounds {
    fn from(b: [f64; 4]) -> Self {
        Bounds {
            min_x: b[0],
            min_y: b[1],
            max_x: b[2],
            max_y: b[3],
        }
    }
}

impl From<Bounds> for [f64; 4] {
    fn from(b: Bounds) -> Self {
        [b.min_x, b.min_y, b.max_x, b.max_y]
    }
}

impl Bounds {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min_x && x <= self.max_x && y >= self.min_y && y <= self.max_y
    }
}

/// One of the four regions around an asset. Quadrant 0 is centred on the
/// asset's +x axis and numbering runs counter-clockwise; each quadrant is the
/// half-open bearing interval `[q·π/2 − π/4, q·π/2 + π/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionId {
    pub asset_id: usize,
    pub quadrant: u8,
}

impl RegionId {
    pub fn new(asset_id: usize, quadrant: u8) -> Result<Self> {
        if quadrant > 3 {
            return Err(Error::Map(format!("quadrant {quadrant} out of range")));
        }
        Ok(Self { asset_id, quadrant })
    }
}

/// Quadrant index for a bearing measured in the asset frame.
pub fn quadrant_of_bearing(bearing: f64) -> u8 {
    ((bearing + FRAC_PI_4) / FRAC_PI_2).floor().rem_euclid(4.0) as u8
}

/// Immutable asset map. Assets are stored by id, which runs over `0..K`.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldMap {
    assets: Vec<AssetPose>,
    bounds: Bounds,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssetRecord {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
    pub length: f64,
    pub width: f64,
    pub symmetric: bool,
}

/// On-disk map document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapFile {
    pub world_bounds: Bounds,
    pub assets: Vec<AssetRecord>,
}

impl WorldMap {
    pub fn new(mut assets: Vec<AssetPose>, bounds: Bounds) -> Result<Self> {
        if assets.is_empty() {
            return Err(Error::Map("map has no assets".into()));
        }
        if !(bounds.min_x < bounds.max_x && bounds.min_y < bounds.max_y) {
            return Err(Error::Map("world bounds are empty".into()));
        }
        assets.sort_by_key(|a| a.id);
        for pair in assets.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::Map(format!("duplicate asset id {}", pair[0].id)));
            }
        }
        let k = assets.len();
        for a in &assets {
            if a.id >= k {
                return Err(Error::Map(format!(
                    "asset id {} outside 0..{k}; ids must be dense",
                    a.id
                )));
            }
            if !(a.half_length > 0.0 && a.half_width > 0.0) {
                return Err(Error::Map(format!("asset {} has an empty footprint", a.id)));
            }
            if !bounds.contains(a.pose.x, a.pose.y) {
                return Err(Error::Map(format!(
                    "asset {} at ({}, {}) lies outside the world bounds",
                    a.id, a.pose.x, a.pose.y
                )));
            }
        }
        Ok(WorldMap { assets, bounds })
    }

    pub fn from_file_doc(doc: MapFile) -> Result<Self> {
        let assets = doc
            .assets
            .into_iter()
            .map(|r| AssetPose {
                id: r.id,
                pose: Pose2::new(r.x, r.y, r.yaw),
                half_length: r.length / 2.0,
                half_width: r.width / 2.0,
                symmetric: r.symmetric,
            })
            .collect();
        WorldMap::new(assets, doc.world_bounds)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: MapFile =
            serde_json::from_str(s).map_err(|e| Error::Map(format!("parse failure: {e}")))?;
        WorldMap::from_file_doc(doc)
    }

    pub fn to_file_doc(&self) -> MapFile {
        MapFile {
            world_bounds: self.bounds,
            assets: self
                .assets
                .iter()
                .map(|a| AssetRecord {
                    id: a.id,
                    x: a.pose.x,
                    y: a.pose.y,
                    yaw: a.pose.yaw,
                    length: 2.0 * a.half_length,
                    width: 2.0 * a.half_width,
                    symmetric: a.symmetric,
                })
                .collect(),
        }
    }

    pub fn assets(&self) -> &[AssetPose] {
        &self.assets
    }

    pub fn len(&self) -> usize {
        self.assets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assets.is_empty()
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn asset(&self, id: usize) -> Result<&AssetPose> {
        self.assets.get(id).ok_or(Error::UnknownAsset(id))
    }

    /// Four assets: a close pair ~24 m apart and two isolated assets roughly
    /// 100 m away, one of them symmetric.
    pub fn inspection_plant() -> Self {
        let asset = |id, x, y, yaw, l: f64, w: f64, symmetric| AssetPose {
            id,
            pose: Pose2::new(x, y, yaw),
            half_length: l / 2.0,
            half_width: w / 2.0,
            symmetric,
        };
        WorldMap::new(
            vec![
                asset(0, 0.0, 0.0, 0.0, 6.0, 3.0, false),
                asset(1, 24.0, 0.0, 0.3, 4.0, 4.0, true),
                asset(2, 90.0, 70.0, 0.8, 8.0, 2.5, false),
                asset(3, -70.0, 95.0, -0.4, 5.0, 5.0, true),
            ],
            Bounds {
                min_x: -200.0,
                min_y: -150.0,
                max_x: 220.0,
                max_y: 250.0,
            },
        )
        .expect("built-in map is valid")
    }
}

pub fn load_map(path: impl AsRef<Path>) -> Result<WorldMap> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    WorldMap::from_json_str(&text).map_err(|e| match e {
        Error::Map(msg) => Error::Map(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Pose of the asset in the sensor frame, `sensor⁻¹ ∘ L_j`.
pub fn relative_pose(sensor: &Pose2, asset: &AssetPose) -> Pose2 {
    sensor.between(&asset.pose)
}

/// Region of the asset's surroundings that the sensor currently occupies.
pub fn region_of(sensor: &Pose2, asset: &AssetPose) -> Result<RegionId> {
    let local = asset.pose.between(sensor);
    if local.x == 0.0 && local.y == 0.0 {
        return Err(Error::CoincidentWithAsset(asset.id));
    }
    Ok(RegionId {
        asset_id: asset.id,
        quadrant: quadrant_of_bearing(local.y.atan2(local.x)),
    })
}

/// Where an asset's oriented box appears in the sonar image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObbView {
    pub center: PixelCoord,
    /// Box rotation: the asset's yaw relative to the sensor.
    pub rotation: f64,
    /// Planar range from sensor to asset centre, metres.
    pub range: f64,
}

/// Expected oriented bounding box of `asset` seen from `sensor`, or `None`
/// when the asset centre falls outside the sonar fan or the image.
pub fn asset_obb_in_image(
    sensor: &Pose2,
    asset: &AssetPose,
    params: &SonarParams,
) -> Option<ObbView> {
    let rel = relative_pose(sensor, asset);
    let range = rel.x.hypot(rel.y);
    if range == 0.0 {
        return None;
    }
    if rel.y.atan2(rel.x).abs() > params.fov() / 2.0 {
        return None;
    }
    let center = project_point(Point3::new(rel.x, rel.y, 0.0), params).ok()?;
    if !params.in_image(&center) {
        return None;
    }
    Some(ObbView {
        center,
        rotation: rel.yaw,
        range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn asset_at(id: usize, x: f64, y: f64, yaw: f64) -> AssetPose {
        AssetPose {
            id,
            pose: Pose2::new(x, y, yaw),
            half_length: 2.0,
            half_width: 1.0,
            symmetric: false,
        }
    }

    /// Homogeneous 3×3 matrix of a pose, used as an independent composition oracle.
    fn matrix(p: &Pose2) -> [[f64; 3]; 3] {
        let (s, c) = p.yaw.sin_cos();
        [[c, -s, p.x], [s, c, p.y], [0.0, 0.0, 1.0]]
    }

    fn matmul(a: [[f64; 3]; 3], b: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        out
    }

    fn rigid_inverse(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let (c, s, tx, ty) = (m[0][0], m[1][0], m[0][2], m[1][2]);
        [
            [c, s, -(c * tx + s * ty)],
            [-s, c, s * tx - c * ty],
            [0.0, 0.0, 1.0],
        ]
    }

    #[test]
    fn relative_pose_examples() {
        let a = asset_at(0, 3.0, -2.0, 0.7);
        let r = relative_pose(&a.pose, &a);
        assert_relative_eq!(r.x, 0.0, epsilon = 1e-12);
        assert_relative_eq!(r.y, 0.0, epsilon = 1e-12);
        assert_eq!(r.yaw, 0.0);

        let r = relative_pose(&Pose2::identity(), &asset_at(0, 10.0, 0.0, 0.0));
        assert_eq!(r, Pose2::new(10.0, 0.0, 0.0));

        let sensor = Pose2::new(10.0, 0.0, PI);
        let r = relative_pose(&sensor, &asset_at(0, 0.0, 0.0, 0.0));
        let m = matmul(rigid_inverse(matrix(&sensor)), matrix(&Pose2::identity()));
        assert_relative_eq!(r.x, m[0][2], epsilon = 1e-12);
        assert_relative_eq!(r.y, m[1][2], epsilon = 1e-12);
        assert_relative_eq!(r.x, 10.0, epsilon = 1e-12);
        assert_relative_eq!(r.y, 0.0, epsilon = 1e-12);
        assert_eq!(r.yaw, PI);
    }

    #[test]
    fn quadrants() {
        let a = asset_at(2, 5.0, 5.0, 0.0);
        assert_eq!(
            region_of(&Pose2::new(15.0, 5.0, 0.3), &a).unwrap().quadrant,
            0
        );
        assert_eq!(
            region_of(&Pose2::new(5.0, 15.0, 0.3), &a).unwrap().quadrant,
            1
        );
        assert_eq!(
            region_of(&Pose2::new(-5.0, 5.0, 0.3), &a).unwrap().quadrant,
            2
        );
        assert_eq!(
            region_of(&Pose2::new(5.0, -5.0, 0.3), &a).unwrap().quadrant,
            3
        );
        assert_eq!(quadrant_of_bearing(FRAC_PI_4), 1);
        assert_eq!(quadrant_of_bearing(-FRAC_PI_4), 0);
        assert_eq!(quadrant_of_bearing(PI), 2);
        assert_eq!(quadrant_of_bearing(-3.0 * FRAC_PI_4), 3);
        assert_eq!(quadrant_of_bearing(-3.0 * FRAC_PI_4 - 1e-9), 2);
        assert!(matches!(
            region_of(&Pose2::new(5.0, 5.0, 1.0), &a),
            Err(Error::CoincidentWithAsset(2))
        ));
    }

    #[test]
    fn quadrant_follows_asset_yaw() {
        // Asset rotated by 90°: its +x axis points along map +y.
        let a = asset_at(0, 0.0, 0.0, FRAC_PI_2);
        assert_eq!(
            region_of(&Pose2::new(0.0, 10.0, 0.0), &a).unwrap().quadrant,
            0
        );
        assert_eq!(
            region_of(&Pose2::new(10.0, 0.0, 0.0), &a).unwrap().quadrant,
            3
        );
    }

    #[test]
    fn obb_examples() {
        let params = SonarParams::default();
        let a = asset_at(0, 10.0, 0.0, 0.0);
        let view = asset_obb_in_image(&Pose2::identity(), &a, &params).unwrap();
        assert_eq!(view.center.u, 220.0);
        assert_relative_eq!(view.center.v, 10.0 * params.beta(), epsilon = 1e-12);
        assert_eq!(view.rotation, 0.0);

        assert!(asset_obb_in_image(&Pose2::new(20.0, 0.0, 0.0), &a, &params).is_none());

        // Sensor yawed by γ with the asset still on its boresight.
        let gamma: f64 = 0.4;
        let sensor = Pose2::new(10.0 - 10.0 * gamma.cos(), -10.0 * gamma.sin(), gamma);
        let view = asset_obb_in_image(&sensor, &a, &params).unwrap();
        assert_relative_eq!(view.rotation, -gamma, epsilon = 1e-12);
        assert_relative_eq!(view.center.u, 220.0, epsilon = 1e-9);
    }

    #[test]
    fn obb_respects_fov_and_range() {
        let params = SonarParams::default();
        // 61° off boresight at 10 m: outside the 120° fan.
        let b = 61f64.to_radians();
        let a = asset_at(0, 10.0 * b.cos(), 10.0 * b.sin(), 0.0);
        assert!(asset_obb_in_image(&Pose2::identity(), &a, &params).is_none());
        let b = 59f64.to_radians();
        let a = asset_at(0, 10.0 * b.cos(), 10.0 * b.sin(), 0.0);
        assert!(asset_obb_in_image(&Pose2::identity(), &a, &params).is_some());
        let a = asset_at(0, 20.5, 0.0, 0.0);
        assert!(asset_obb_in_image(&Pose2::identity(), &a, &params).is_none());
    }

    #[test]
    fn map_validation() {
        let bounds = Bounds::from([-50.0, -50.0, 50.0, 50.0]);
        assert!(WorldMap::new(vec![], bounds).is_err());
        let dup = vec![asset_at(0, 0.0, 0.0, 0.0), asset_at(0, 5.0, 0.0, 0.0)];
        assert!(
            matches!(WorldMap::new(dup, bounds), Err(Error::Map(m)) if m.contains("duplicate"))
        );
        let outside = vec![asset_at(0, 80.0, 0.0, 0.0)];
        assert!(
            matches!(WorldMap::new(outside, bounds), Err(Error::Map(m)) if m.contains("outside"))
        );
        let sparse = vec![asset_at(0, 0.0, 0.0, 0.0), asset_at(5, 1.0, 0.0, 0.0)];
        assert!(WorldMap::new(sparse, bounds).is_err());
        let ok = vec![asset_at(1, 0.0, 0.0, 0.0), asset_at(0, 1.0, 0.0, 0.0)];
        let map = WorldMap::new(ok, bounds).unwrap();
        assert_eq!(map.asset(1).unwrap().pose.x, 0.0);
        assert!(matches!(map.asset(2), Err(Error::UnknownAsset(2))));
    }

    #[test]
    fn map_json() {
        let json = r#"{
            "world_bounds": [-10, -10, 10, 10],
            "assets": [
                {"id": 0, "x": 1, "y": 2, "yaw": 0.5, "length": 4, "width": 2, "symmetric": true}
            ]
        }"#;
        let map = WorldMap::from_json_str(json).unwrap();
        assert_eq!(map.len(), 1);
        let a = map.asset(0).unwrap();
        assert_eq!((a.half_length, a.half_width, a.symmetric), (2.0, 1.0, true));
        assert!(WorldMap::from_json_str(r#"{"world_bounds": [0,0,1,1], "assets": []}"#).is_err());
        assert!(WorldMap::from_json_str("{not json").is_err());
    }

    #[test]
    fn built_in_plant_layout() {
        let map = WorldMap::inspection_plant();
        assert_eq!(map.len(), 4);
        let d01 = map
            .asset(0)
            .unwrap()
            .pose
            .distance_to(&map.asset(1).unwrap().pose);
        assert!((15.0..=30.0).contains(&d01));
        for far in [2, 3] {
            let d = map
                .asset(0)
                .unwrap()
                .pose
                .distance_to(&map.asset(far).unwrap().pose);
            assert!((80.0..=140.0).contains(&d), "asset {far} at {d} m");
        }
    }

    fn pose_strategy() -> impl Strategy<Value = Pose2> {
        (-100.0f64..100.0, -100.0f64..100.0, -PI..PI).prop_map(|(x, y, t)| Pose2::new(x, y, t))
    }

    proptest! {
        #[test]
        fn between_then_compose_recovers(a in pose_strategy(), b in pose_strategy()) {
            let back = a.compose(&a.between(&b));
            prop_assert!((back.x - b.x).abs() < 1e-9);
            prop_assert!((back.y - b.y).abs() < 1e-9);
            prop_assert!(crate::angle::angle_diff(back.yaw, b.yaw).abs() < 1e-12);
        }

        #[test]
        fn between_matches_matrix_oracle(a in pose_strategy(), b in pose_strategy()) {
            let r = a.between(&b);
            let m = matmul(rigid_inverse(matrix(&a)), matrix(&b));
            prop_assert!((r.x - m[0][2]).abs() < 1e-9);
            prop_assert!((r.y - m[1][2]).abs() < 1e-9);
            prop_assert!(crate::angle::angle_diff(r.yaw, m[1][0].atan2(m[0][0])).abs() < 1e-12);
            let inv = a.inverse().compose(&b);
            prop_assert!((inv.x - r.x).abs() < 1e-9 && (inv.y - r.y).abs() < 1e-9);
        }

        #[test]
        fn region_invariant_under_rigid_motion(
            sensor in pose_strategy(), asset_pose in pose_strategy(), motion in pose_strategy()
        ) {
            prop_assume!(sensor.distance_to(&asset_pose) > 1e-3);
            let a = AssetPose { id: 0, pose: asset_pose, half_length: 1.0, half_width: 1.0, symmetric: false };
            let moved = AssetPose { pose: motion.compose(&asset_pose), ..a.clone() };
            let before = region_of(&sensor, &a).unwrap();
            let after = region_of(&motion.compose(&sensor), &moved).unwrap();
            // Rounding can only matter within a hair of a quadrant boundary.
            let local = asset_pose.between(&sensor);
            let bearing = local.y.atan2(local.x);
            let to_edge = ((bearing + FRAC_PI_4).rem_euclid(FRAC_PI_2)).min(
                FRAC_PI_2 - (bearing + FRAC_PI_4).rem_euclid(FRAC_PI_2));
            prop_assume!(to_edge > 1e-9);
            prop_assert_eq!(before, after);
        }

        #[test]
        fn every_bearing_has_one_quadrant(b in -PI..=PI) {
            let q = quadrant_of_bearing(b);
            prop_assert!(q < 4);
            let lo = f64::from(q) * FRAC_PI_2 - FRAC_PI_4;
            let shifted = crate::angle::normalize_angle(b - lo);
            prop_assert!((-1e-12..FRAC_PI_2 + 1e-12).contains(&shifted));
        }

        #[test]
        fn obb_none_iff_outside_frustum(sensor in pose_strategy(), ax in -30.0f64..30.0, ay in -30.0f64..30.0) {
            let params = SonarParams::default();
            let a = asset_at(0, sensor.x + ax, sensor.y + ay, 0.0);
            let rel = relative_pose(&sensor, &a);
            let range = rel.x.hypot(rel.y);
            prop_assume!(range > 1e-6);
            let inside_fan = rel.y.atan2(rel.x).abs() <= params.fov() / 2.0;
            let projected = project_point(Point3::new(rel.x, rel.y, 0.0), &params).unwrap();
            let expected = inside_fan && params.in_image(&projected);
            prop_assert_eq!(asset_obb_in_image(&sensor, &a, &params).is_some(), expected);
        }
    }
}
