//! SE(2) particle filter with the asset-detector and place-recognition
//! observation models.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::angle_diff;
use crate::error::{Error, Result};
use crate::frontend::{ObbDetection, RegionObservation};
use crate::sonar::{PixelCoord, SonarParams};
use crate::world::{asset_obb_in_image, region_of, Pose2, WorldMap};

/// Floor applied after normalization so that no hypothesis ever reaches an
/// exact zero weight through repeated penalties.
const MIN_WEIGHT: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub pose: Pose2,
    pub weight: f64,
}

/// Body-frame velocity command held for `dt` seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlInput {
    pub vx: f64,
    pub vy: f64,
    pub yaw_rate: f64,
    pub dt: f64,
}

impl ControlInput {
    pub fn zero(dt: f64) -> Self {
        Self {
            vx: 0.0,
            vy: 0.0,
            yaw_rate: 0.0,
            dt,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!(
                "control dt must be > 0, got {}",
                self.dt
            )));
        }
        if !(self.vx.is_finite() && self.vy.is_finite() && self.yaw_rate.is_finite()) {
            return Err(Error::Config("control input is not finite".into()));
        }
        Ok(())
    }

    /// Pose reached from `pose` under this control with no noise.
    pub fn apply(&self, pose: &Pose2) -> Pose2 {
        let (s, c) = pose.yaw.sin_cos();
        let dx = self.vx * self.dt;
        let dy = self.vy * self.dt;
        Pose2::new(
            pose.x + c * dx - s * dy,
            pose.y + s * dx + c * dy,
            pose.yaw + self.yaw_rate * self.dt,
        )
    }
}

/// Per-step process noise added in the map frame by [`ParticleSet::predict`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotionNoise {
    pub position_sigma: f64,
    pub yaw_sigma: f64,
}

impl Default for MotionNoise {
    fn default() -> Self {
        MotionNoise {
            position_sigma: 0.2,
            yaw_sigma: 0.05,
        }
    }
}

impl MotionNoise {
    pub fn none() -> Self {
        MotionNoise {
            position_sigma: 0.0,
            yaw_sigma: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    /// Weight of the squared pixel error against the rotation term, 1/px².
    pub eta: f64,
    /// Multiplicative boost for particles inside the recognised region.
    pub alpha: f64,
    pub motion: MotionNoise,
    /// Resample when ESS drops below this fraction of N.
    pub resample_threshold: f64,
    /// Upper bound on the detector distance; also the penalty for particles
    /// that cannot see the detected asset.
    pub max_dist: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            eta: 5e-4,
            alpha: 4.0,
            motion: MotionNoise::default(),
            resample_threshold: 0.5,
            max_dist: 10.0,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::Config(format!("eta must be > 0, got {}", self.eta)));
        }
        if !(self.alpha > 1.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!(
                "alpha must be > 1, got {}",
                self.alpha
            )));
        }
        if !(self.resample_threshold > 0.0 && self.resample_threshold <= 1.0) {
            return Err(Error::Config(format!(
                "resample_threshold must lie in (0, 1], got {}",
                self.resample_threshold
            )));
        }
        if !(self.max_dist > 0.0 && self.max_dist.is_finite()) {
            return Err(Error::Config(format!(
                "max_dist must be > 0, got {}",
                self.max_dist
            )));
        }
        if !(self.motion.position_sigma >= 0.0 && self.motion.yaw_sigma >= 0.0) {
            return Err(Error::Config("motion noise sigmas must be >= 0".into()));
        }
        Ok(())
    }
}

/// Detector distance between a predicted and an observed box:
/// `η‖ĉ − c̃‖² + |sin(δ̂ − δ̃)|`. The sine term cannot tell δ from δ + π.
pub fn obb_distance(
    eta: f64,
    predicted_center: &PixelCoord,
    predicted_rotation: f64,
    observed_center: &PixelCoord,
    observed_rotation: f64,
) -> f64 {
    eta * predicted_center.distance_squared(observed_center)
        + angle_diff(predicted_rotation, observed_rotation)
            .sin()
            .abs()
}

/// Weighted mean pose plus a spread summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub pose: Pose2,
    pub cov_xx: f64,
    pub cov_xy: f64,
    pub cov_yy: f64,
    /// `1 − |Σ wᵢ e^{iθᵢ}|`: 0 when all yaws agree, 1 when they cancel.
    pub yaw_circular_variance: f64,
}

impl Estimate {
    /// Root of the position covariance trace, metres.
    pub fn position_spread(&self) -> f64 {
        (self.cov_xx + self.cov_yy).max(0.0).sqrt()
    }
}

/// Systematic (low-variance) resampling: one uniform draw, `n` evenly spaced
/// pointers into the cumulative weights. Returns the chosen source indices.
pub fn systematic_indices<R: Rng + ?Sized>(
    weights: &[f64],
    n: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let total: f64 = weights.iter().sum();
    if weights.is_empty() || !(total > 0.0 && total.is_finite()) {
        return Err(Error::DegenerateWeights);
    }
    let step = total / n as f64;
    let mut pointer = rng.random::<f64>() * step;
    let mut idx = 0;
    let mut cumulative = weights[0];
    let last = weights.len() - 1;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        while pointer >= cumulative && idx < last {
            idx += 1;
            cumulative += weights[idx];
        }
        out.push(idx);
        pointer += step;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSet {
    particles: Vec<Particle>,
    generation: u64,
}

impl ParticleSet {
    /// Wraps explicit particles, normalizing their weights.
    pub fn from_particles(particles: Vec<Particle>) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::Config("particle set must not be empty".into()));
        }
        if particles
            .iter()
            .any(|p| !(p.weight >= 0.0 && p.weight.is_finite()))
        {
            return Err(Error::Config(
                "particle weights must be finite and >= 0".into(),
            ));
        }
        let mut set = ParticleSet {
            particles,
            generation: 0,
        };
        set.normalize()?;
        Ok(set)
    }

    /// `n` particles spread uniformly by area over a disc around `center`,
    /// yaw uniform over `yaw_range`, equal weights.
    pub fn init_uniform_disc<R: Rng + ?Sized>(
        center: &Pose2,
        radius: f64,
        n: usize,
        yaw_range: RangeInclusive<f64>,
        rng: &mut R,
    ) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Config(format!(
                "init radius must be > 0, got {radius}"
            )));
        }
        if n == 0 {
            return Err(Error::Config("particle count must be >= 1".into()));
        }
        let (lo, hi) = (*yaw_range.start(), *yaw_range.end());
        if !(lo <= hi) {
            return Err(Error::Config(format!("empty yaw range {lo}..={hi}")));
        }
        let w = 1.0 / n as f64;
        let particles = (0..n)
            .map(|_| {
                let r = radius * rng.random::<f64>().sqrt();
                let phi = rng.random::<f64>() * std::f64::consts::TAU;
                let yaw = lo + (hi - lo) * rng.random::<f64>();
                Particle {
                    pose: Pose2::new(center.x + r * phi.cos(), center.y + r * phi.sin(), yaw),
                    weight: w,
                }
            })
            .collect();
        Ok(ParticleSet {
            particles,
            generation: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    /// Number of resampling rounds so far.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    fn normalize(&mut self) -> Result<()> {
        let total: f64 = self.particles.iter().map(|p| p.weight).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::DegenerateWeights);
        }
        for p in &mut self.particles {
            p.weight = (p.weight / total).max(MIN_WEIGHT);
        }
        Ok(())
    }

    /// Propagates every particle through the constant-velocity model and adds
    /// zero-mean Gaussian noise. Weights are untouched.
    pub fn predict<R: Rng + ?Sized>(
        &mut self,
        u: &ControlInput,
        noise: &MotionNoise,
        rng: &mut R,
    ) -> Result<()> {
        u.validate()?;
        let pos = Normal::new(0.0, noise.position_sigma)
            .map_err(|e| Error::Config(format!("position noise: {e}")))?;
        let yaw = Normal::new(0.0, noise.yaw_sigma)
            .map_err(|e| Error::Config(format!("yaw noise: {e}")))?;
        let noisy = noise.position_sigma > 0.0 || noise.yaw_sigma > 0.0;
        for p in &mut self.particles {
            let moved = u.apply(&p.pose);
            p.pose = if noisy {
                Pose2::new(
                    moved.x + pos.sample(rng),
                    moved.y + pos.sample(rng),
                    moved.yaw + yaw.sample(rng),
                )
            } else {
                moved
            };
        }
        Ok(())
    }

    /// Asset-detector update: each particle predicts the detected asset's box
    /// from its own pose and is down-weighted by `exp(−dist)`.
    pub fn update_sad(
        &mut self,
        det: &ObbDetection,
        map: &WorldMap,
        params: &SonarParams,
        config: &FilterConfig,
    ) -> Result<()> {
        let asset = map.asset(det.asset_id)?;
        let cap = config.max_dist;
        self.particles.par_iter_mut().for_each(|p| {
            let dist = match asset_obb_in_image(&p.pose, asset, params) {
                Some(view) => obb_distance(
                    config.eta,
                    &view.center,
                    view.rotation,
                    &det.center,
                    det.rotation,
                )
                .min(cap),
                None => cap,
            };
            p.weight *= (-dist).exp();
        });
        self.normalize()
    }

    /// Place-recognition update: particles inside the reported region, and
    /// within sonar range of its asset, are boosted by `alpha`.
    pub fn update_prec(
        &mut self,
        obs: &RegionObservation,
        map: &WorldMap,
        params: &SonarParams,
        config: &FilterConfig,
    ) -> Result<()> {
        let Some(region) = obs.region else {
            return Ok(());
        };
        let asset = map.asset(region.asset_id)?;
        let r_max = params.r_max();
        self.particles.par_iter_mut().for_each(|p| {
            let in_region = p.pose.distance_to(&asset.pose) <= r_max
                && region_of(&p.pose, asset).is_ok_and(|r| r == region);
            if in_region {
                p.weight *= config.alpha;
            }
        });
        self.normalize()
    }

    /// `1 / Σ wᵢ²`.
    pub fn effective_sample_size(&self) -> f64 {
        1.0 / self
            .particles
            .iter()
            .map(|p| p.weight * p.weight)
            .sum::<f64>()
    }

    /// Systematic resampling to the same N with uniform weights.
    pub fn resample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let weights: Vec<f64> = self.particles.iter().map(|p| p.weight).collect();
        let n = self.particles.len();
        let picks = systematic_indices(&weights, n, rng)?;
        let w = 1.0 / n as f64;
        self.particles = picks
            .into_iter()
            .map(|i| Particle {
                pose: self.particles[i].pose,
                weight: w,
            })
            .collect();
        self.generation += 1;
        Ok(())
    }

    /// Resamples when ESS falls below `threshold · N`; reports whether it did.
    pub fn resample_if_degenerate<R: Rng + ?Sized>(
        &mut self,
        threshold: f64,
        rng: &mut R,
    ) -> Result<bool> {
        if self.effective_sample_size() < threshold * self.len() as f64 {
            self.resample(rng)?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub fn estimate(&self) -> Estimate {
        let (mut mx, mut my, mut ms, mut mc) = (0.0, 0.0, 0.0, 0.0);
        for p in &self.particles {
            let (s, c) = p.pose.yaw.sin_cos();
            mx += p.weight * p.pose.x;
            my += p.weight * p.pose.y;
            ms += p.weight * s;
            mc += p.weight * c;
        }
        let (mut cxx, mut cxy, mut cyy) = (0.0, 0.0, 0.0);
        for p in &self.particles {
            let dx = p.pose.x - mx;
            let dy = p.pose.y - my;
            cxx += p.weight * dx * dx;
            cxy += p.weight * dx * dy;
            cyy += p.weight * dy * dy;
        }
        Estimate {
            pose: Pose2::new(mx, my, ms.atan2(mc)),
            cov_xx: cxx,
            cov_xy: cxy,
            cov_yy: cyy,
            yaw_circular_variance: (1.0 - ms.hypot(mc)).clamp(0.0, 1.0),
        }
    }

    /// Dumps the set as `i,x,y,yaw,w`.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        let mut write = || -> std::io::Result<()> {
            writeln!(out, "i,x,y,yaw,w")?;
            for (i, p) in self.particles.iter().enumerate() {
                writeln!(
                    out,
                    "{i},{:.6},{:.6},{:.6},{:e}",
                    p.pose.x, p.pose.y, p.pose.yaw, p.weight
                )?;
            }
            out.flush()
        };
        write().map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{AssetPose, Bounds, RegionId};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn set_of(poses: &[Pose2]) -> ParticleSet {
        ParticleSet::from_particles(
            poses
                .iter()
                .map(|&pose| Particle { pose, weight: 1.0 })
                .collect(),
        )
        .unwrap()
    }

    fn one_asset_map() -> WorldMap {
        WorldMap::new(
            vec![AssetPose {
                id: 0,
                pose: Pose2::new(0.0, 0.0, 0.0),
                half_length: 2.0,
                half_width: 1.0,
                symmetric: true,
            }],
            Bounds::from([-100.0, -100.0, 100.0, 100.0]),
        )
        .unwrap()
    }

    fn weight_sum(set: &ParticleSet) -> f64 {
        set.particles().iter().map(|p| p.weight).sum()
    }

    #[test]
    fn disc_init_protocols() {
        let center = Pose2::new(5.0, -3.0, 0.4);
        let set =
            ParticleSet::init_uniform_disc(&center, 100.0, 3000, 0.0..=TAU, &mut rng(1)).unwrap();
        assert_eq!(set.len(), 3000);
        assert!(set
            .particles()
            .iter()
            .all(|p| p.pose.distance_to(&center) <= 100.0));
        assert!(set.particles().iter().all(|p| p.weight == 1.0 / 3000.0));
        // Area-uniform: about a quarter of the mass inside half the radius.
        let inner = set
            .particles()
            .iter()
            .filter(|p| p.pose.distance_to(&center) < 50.0)
            .count() as f64
            / 3000.0;
        assert!((inner - 0.25).abs() < 0.04, "inner fraction {inner}");

        let spread = PI / 20.0;
        let set = ParticleSet::init_uniform_disc(
            &center,
            1.0,
            1500,
            center.yaw - spread..=center.yaw + spread,
            &mut rng(2),
        )
        .unwrap();
        assert!(set
            .particles()
            .iter()
            .all(|p| p.pose.distance_to(&center) <= 1.0
                && angle_diff(p.pose.yaw, center.yaw).abs() <= spread + 1e-12));

        let single =
            ParticleSet::init_uniform_disc(&center, 2.0, 1, 0.0..=TAU, &mut rng(3)).unwrap();
        assert_eq!(single.particles()[0].weight, 1.0);
        assert!(single.particles()[0].pose.distance_to(&center) <= 2.0);

        assert!(ParticleSet::init_uniform_disc(&center, 0.0, 10, 0.0..=1.0, &mut rng(3)).is_err());
        assert!(ParticleSet::init_uniform_disc(&center, 1.0, 0, 0.0..=1.0, &mut rng(3)).is_err());
    }

    #[test]
    fn predict_examples() {
        let poses = [Pose2::new(1.0, 2.0, 0.0), Pose2::new(-4.0, 0.5, 0.0)];
        let mut set = set_of(&poses);
        let before = set.clone();
        set.predict(&ControlInput::zero(0.2), &MotionNoise::none(), &mut rng(0))
            .unwrap();
        assert_eq!(set, before);

        let u = ControlInput {
            vx: 1.0,
            vy: 0.0,
            yaw_rate: 0.0,
            dt: 1.0,
        };
        set.predict(&u, &MotionNoise::none(), &mut rng(0)).unwrap();
        for (p, q) in set.particles().iter().zip(&poses) {
            assert_eq!((p.pose.x, p.pose.y), (q.x + 1.0, q.y));
        }

        let mut set = set_of(&[Pose2::new(0.0, 0.0, FRAC_PI_2)]);
        set.predict(&u, &MotionNoise::none(), &mut rng(0)).unwrap();
        let p = set.particles()[0].pose;
        assert_relative_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(p.y, 1.0, epsilon = 1e-15);

        let bad = ControlInput { dt: 0.0, ..u };
        assert!(set
            .predict(&bad, &MotionNoise::none(), &mut rng(0))
            .is_err());
    }

    #[test]
    fn predict_noise_statistics() {
        let mut set = set_of(&vec![Pose2::identity(); 20000]);
        let noise = MotionNoise {
            position_sigma: 0.5,
            yaw_sigma: 0.1,
        };
        set.predict(&ControlInput::zero(1.0), &noise, &mut rng(4))
            .unwrap();
        let n = set.len() as f64;
        let var_x = set
            .particles()
            .iter()
            .map(|p| p.pose.x * p.pose.x)
            .sum::<f64>()
            / n;
        let var_t = set
            .particles()
            .iter()
            .map(|p| p.pose.yaw * p.pose.yaw)
            .sum::<f64>()
            / n;
        assert!((var_x.sqrt() - 0.5).abs() < 0.02);
        assert!((var_t.sqrt() - 0.1).abs() < 0.004);
    }

    #[test]
    fn distance_examples() {
        let c = PixelCoord::new(100.0, 50.0);
        assert_eq!(obb_distance(0.01, &c, 0.3, &c, 0.3), 0.0);
        assert!(obb_distance(0.01, &c, 0.3 + PI, &c, 0.3) < 1e-15);
        let off = PixelCoord::new(106.0, 58.0);
        let d = obb_distance(0.01, &off, FRAC_PI_2, &c, 0.0);
        assert_relative_eq!(d, 2.0, epsilon = 1e-12);
        assert_relative_eq!((-d).exp(), 0.1353352832366127, epsilon = 1e-12);
    }

    #[test]
    fn sad_update_prefers_matching_particle() {
        let map = one_asset_map();
        let params = SonarParams::default();
        let truth = Pose2::new(-10.0, 0.0, 0.0);
        let twin = Pose2::new(10.0, 0.0, PI);
        let off = Pose2::new(-10.0, 3.0, 0.0);
        let blind = Pose2::new(-10.0, 0.0, PI);
        let mut set = set_of(&[truth, twin, off, blind]);
        let view = asset_obb_in_image(&truth, map.asset(0).unwrap(), &params).unwrap();
        let det = ObbDetection {
            asset_id: 0,
            center: view.center,
            rotation: view.rotation,
            timestamp: 0.0,
        };
        let config = FilterConfig::default();
        set.update_sad(&det, &map, &params, &config).unwrap();
        let w: Vec<f64> = set.particles().iter().map(|p| p.weight).collect();
        assert_relative_eq!(w[0], w[1], max_relative = 1e-12);
        assert!(w[0] > w[2] && w[2] >= w[3]);
        assert_relative_eq!(w[3] / w[0], (-10f64).exp(), max_relative = 1e-9);
        assert_relative_eq!(weight_sum(&set), 1.0, epsilon = 1e-12);

        let bad = ObbDetection { asset_id: 9, ..det };
        assert!(matches!(
            set.update_sad(&bad, &map, &params, &config),
            Err(Error::UnknownAsset(9))
        ));
    }

    #[test]
    fn prec_update_examples() {
        let map = one_asset_map();
        let params = SonarParams::default();
        let config = FilterConfig {
            alpha: 2.0,
            ..Default::default()
        };
        let front = |y| Pose2::new(8.0, y, PI);
        let back = |y| Pose2::new(-8.0, y, 0.0);
        let mut set = set_of(&[
            front(0.0),
            front(1.0),
            back(0.0),
            back(1.0),
            Pose2::new(30.0, 0.0, PI),
        ]);
        let none = RegionObservation {
            region: None,
            timestamp: 0.0,
        };
        let before = set.clone();
        set.update_prec(&none, &map, &params, &config).unwrap();
        assert_eq!(set, before);

        let obs = RegionObservation {
            region: Some(RegionId {
                asset_id: 0,
                quadrant: 0,
            }),
            timestamp: 0.0,
        };
        set.update_prec(&obs, &map, &params, &config).unwrap();
        let w: Vec<f64> = set.particles().iter().map(|p| p.weight).collect();
        assert_relative_eq!(w[0] / w[2], 2.0, epsilon = 1e-12);
        assert_relative_eq!(w[1] / w[3], 2.0, epsilon = 1e-12);
        // Out of sonar range: same quadrant but no boost.
        assert_relative_eq!(w[4], w[2], epsilon = 1e-15);

        let mut all_in = set_of(&[front(0.0), front(1.0), front(-1.0)]);
        let before = all_in.clone();
        all_in.update_prec(&obs, &map, &params, &config).unwrap();
        for (a, b) in all_in.particles().iter().zip(before.particles()) {
            assert_relative_eq!(a.weight, b.weight, epsilon = 1e-15);
        }
    }

    #[test]
    fn ess_examples() {
        let set = set_of(&vec![Pose2::identity(); 1500]);
        assert_relative_eq!(set.effective_sample_size(), 1500.0, max_relative = 1e-9);
        let lone = ParticleSet::from_particles(vec![
            Particle {
                pose: Pose2::identity(),
                weight: 1.0,
            },
            Particle {
                pose: Pose2::identity(),
                weight: 0.0,
            },
        ])
        .unwrap();
        assert_relative_eq!(lone.effective_sample_size(), 1.0, epsilon = 1e-12);
        let two = ParticleSet::from_particles(vec![
            Particle {
                pose: Pose2::identity(),
                weight: 0.75,
            },
            Particle {
                pose: Pose2::identity(),
                weight: 0.25,
            },
        ])
        .unwrap();
        assert_relative_eq!(two.effective_sample_size(), 1.6, epsilon = 1e-12);
    }

    #[test]
    fn resample_examples() {
        let uniform = vec![0.25; 4];
        for seed in 0..20 {
            let idx = systematic_indices(&uniform, 4, &mut rng(seed)).unwrap();
            assert_eq!(idx, vec![0, 1, 2, 3]);
        }
        let idx = systematic_indices(&[1.0, 0.0, 0.0, 0.0], 4, &mut rng(1)).unwrap();
        assert_eq!(idx, vec![0; 4]);
        assert!(matches!(
            systematic_indices(&[0.0, 0.0], 2, &mut rng(1)),
            Err(Error::DegenerateWeights)
        ));

        let mut set = ParticleSet::from_particles(vec![
            Particle {
                pose: Pose2::new(1.0, 0.0, 0.0),
                weight: 3.0,
            },
            Particle {
                pose: Pose2::new(2.0, 0.0, 0.0),
                weight: 1.0,
            },
        ])
        .unwrap();
        set.resample(&mut rng(5)).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.generation(), 1);
        assert!(set.particles().iter().all(|p| p.weight == 0.5));
    }

    #[test]
    fn conditional_resampling() {
        let mut set = set_of(&vec![Pose2::identity(); 10]);
        assert!(!set.resample_if_degenerate(0.5, &mut rng(0)).unwrap());
        let mut skewed = ParticleSet::from_particles(
            (0..10)
                .map(|i| Particle {
                    pose: Pose2::new(i as f64, 0.0, 0.0),
                    weight: if i == 0 { 100.0 } else { 1.0 },
                })
                .collect(),
        )
        .unwrap();
        assert!(skewed.resample_if_degenerate(0.5, &mut rng(0)).unwrap());
        assert_eq!(skewed.len(), 10);
        set.resample(&mut rng(1)).unwrap();
    }

    #[test]
    fn estimate_examples() {
        let p = Pose2::new(3.0, -1.0, 0.7);
        let e = set_of(&[p, p, p]).estimate();
        assert_relative_eq!(e.pose.x, 3.0, epsilon = 1e-12);
        assert_relative_eq!(e.pose.yaw, 0.7, epsilon = 1e-12);
        assert!(e.position_spread() < 1e-12);
        assert!(e.yaw_circular_variance < 1e-12);

        let e = set_of(&[Pose2::new(0.0, 0.0, 3.0), Pose2::new(0.0, 0.0, -3.0)]).estimate();
        assert!((e.pose.yaw.abs() - PI).abs() < 1e-9);

        // Two antipodal inspection hypotheses around an asset at the origin.
        let e = set_of(&[Pose2::new(-10.0, 0.0, 0.0), Pose2::new(10.0, 0.0, PI)]).estimate();
        assert!(e.pose.x.abs() < 1e-12 && e.pose.y.abs() < 1e-12);
        assert_relative_eq!(e.position_spread(), 10.0, epsilon = 1e-12);
        assert!(e.yaw_circular_variance > 0.99);
    }

    #[test]
    fn snapshot_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        set_of(&[Pose2::new(1.0, 2.0, 0.5), Pose2::new(-1.0, 0.0, 0.0)])
            .write_csv(&path)
            .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "i,x,y,yaw,w");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,1.000000,2.000000,0.500000,5e-1"));
    }

    #[test]
    fn config_validation() {
        assert!(FilterConfig::default().validate().is_ok());
        for bad in [
            FilterConfig {
                alpha: 1.0,
                ..Default::default()
            },
            FilterConfig {
                eta: 0.0,
                ..Default::default()
            },
            FilterConfig {
                resample_threshold: 0.0,
                ..Default::default()
            },
            FilterConfig {
                resample_threshold: 1.5,
                ..Default::default()
            },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    fn pose_strategy() -> impl Strategy<Value = Pose2> {
        (-30.0f64..30.0, -30.0f64..30.0, -PI..PI).prop_map(|(x, y, t)| Pose2::new(x, y, t))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn distance_ignores_half_turn(
            u1 in -500.0f64..500.0, v1 in -500.0f64..500.0, d1 in -PI..PI,
            u2 in -500.0f64..500.0, v2 in -500.0f64..500.0, d2 in -PI..PI,
        ) {
            let a = PixelCoord::new(u1, v1);
            let b = PixelCoord::new(u2, v2);
            let base = obb_distance(0.01, &a, d1, &b, d2);
            let flipped = obb_distance(0.01, &a, crate::angle::normalize_angle(d1 + PI), &b, d2);
            prop_assert!((base - flipped).abs() <= 1e-12 * base.max(1.0));
        }

        #[test]
        fn updates_keep_n_and_normalization(
            poses in proptest::collection::vec(pose_strategy(), 1..60),
            truth in pose_strategy(),
            seed in 0u64..1000,
        ) {
            let map = one_asset_map();
            let params = SonarParams::default();
            let config = FilterConfig::default();
            let n = poses.len();
            let mut set = set_of(&poses);
            let mut r = rng(seed);
            let u = ControlInput { vx: 0.3, vy: 0.1, yaw_rate: 0.05, dt: 0.2 };
            set.predict(&u, &config.motion, &mut r).unwrap();
            prop_assert_eq!(set.len(), n);
            if let Some(view) = asset_obb_in_image(&truth, map.asset(0).unwrap(), &params) {
                let det = ObbDetection { asset_id: 0, center: view.center, rotation: view.rotation, timestamp: 0.0 };
                set.update_sad(&det, &map, &params, &config).unwrap();
                prop_assert_eq!(set.len(), n);
                prop_assert!((weight_sum(&set) - 1.0).abs() < 1e-9);
                prop_assert!(set.particles().iter().all(|p| p.weight > 0.0));
            }
            if let Ok(region) = region_of(&truth, map.asset(0).unwrap()) {
                let obs = RegionObservation { region: Some(region), timestamp: 0.0 };
                set.update_prec(&obs, &map, &params, &config).unwrap();
                prop_assert_eq!(set.len(), n);
                prop_assert!((weight_sum(&set) - 1.0).abs() < 1e-9);
            }
            set.resample(&mut r).unwrap();
            prop_assert_eq!(set.len(), n);
            prop_assert!((weight_sum(&set) - 1.0).abs() < 1e-9);
        }

        #[test]
        fn prec_keeps_argmax_when_all_in_region(
            ys in proptest::collection::vec(-5.0f64..5.0, 2..30),
            ws in proptest::collection::vec(0.01f64..1.0, 30),
        ) {
            let map = one_asset_map();
            let particles: Vec<_> = ys.iter().zip(&ws).map(|(&y, &w)| Particle { pose: Pose2::new(10.0, y, PI), weight: w }).collect();
            let mut set = ParticleSet::from_particles(particles).unwrap();
            let argmax = |s: &ParticleSet| s.particles().iter().enumerate()
                .max_by(|a, b| a.1.weight.total_cmp(&b.1.weight)).unwrap().0;
            let before = argmax(&set);
            let obs = RegionObservation { region: Some(RegionId { asset_id: 0, quadrant: 0 }), timestamp: 0.0 };
            set.update_prec(&obs, &map, &SonarParams::default(), &FilterConfig::default()).unwrap();
            prop_assert_eq!(argmax(&set), before);
        }
    }
}
