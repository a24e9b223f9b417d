use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::FilterConfig;
use crate::frontend::DetectorNoise;
use crate::mission::{MissionOptions, OdometryNoise};
use crate::sonar::SonarParams;
use crate::world::{load_map, MapFile, WorldMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Lost start: particles spread over a wide disc with random yaw.
    Localization,
    /// Known start: particles tightly around the true pose.
    Tracking,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Localization => "localization",
            Mode::Tracking => "tracking",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frontends {
    #[serde(rename = "sad")]
    Sad,
    #[serde(rename = "sad+prec")]
    SadPrec,
}

impl Frontends {
    pub fn uses_prec(self) -> bool {
        matches!(self, Frontends::SadPrec)
    }
}

impl fmt::Display for Frontends {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frontends::Sad => "sad",
            Frontends::SadPrec => "sad+prec",
        })
    }
}

/// A run succeeds when its final position error is strictly below
/// `position` and, if `yaw` is set, its final yaw error is below that too.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// metres
    pub position: f64,
    /// radians
    pub yaw: Option<f64>,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            position: 3.0,
            yaw: Some(0.35),
        }
    }
}

impl Thresholds {
    pub fn accepts(&self, position_error: f64, yaw_error: f64) -> bool {
        position_error < self.position && self.yaw.is_none_or(|y| yaw_error < y)
    }
}

/// Where the asset map comes from: a JSON file (relative paths resolve
/// against the config file's directory) or an inline map document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSource {
    Path(PathBuf),
    Inline(MapFile),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub mission_id: u8,
    pub frontends: Frontends,
    /// Defaults to 3000 for localization and 1500 for tracking.
    #[serde(default)]
    pub particles: Option<usize>,
    /// Defaults to 100 m for localization and 1 m for tracking.
    #[serde(default)]
    pub init_radius: Option<f64>,
    /// Half-width of the initial yaw spread in tracking mode.
    #[serde(default = "default_yaw_perturbation")]
    pub yaw_perturbation: f64,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub success: Thresholds,
    /// Built-in four-asset plant when absent.
    #[serde(default)]
    pub map: Option<MapSource>,
    #[serde(default)]
    pub sonar: SonarParams,
    #[serde(default)]
    pub detector: DetectorNoise,
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub mission: MissionOptions,
    #[serde(default)]
    pub odometry: OdometryNoise,
    /// Stop a run early once this much simulated time has elapsed, seconds.
    #[serde(default)]
    pub max_time: Option<f64>,
    /// Particle snapshot spacing along the path, metres.
    #[serde(default = "default_snapshot_every")]
    pub snapshot_every_m: u64,
}

fn default_yaw_perturbation() -> f64 {
    PI / 20.0
}

fn default_snapshot_every() -> u64 {
    10
}

impl ExperimentConfig {
    fn base(mode: Mode, mission_id: u8, frontends: Frontends, seeds: Vec<u64>) -> Self {
        ExperimentConfig {
            mode,
            mission_id,
            frontends,
            particles: None,
            init_radius: None,
            yaw_perturbation: default_yaw_perturbation(),
            seeds,
            success: Thresholds::default(),
            map: None,
            sonar: SonarParams::default(),
            detector: DetectorNoise::default(),
            filter: FilterConfig::default(),
            mission: MissionOptions::default(),
            odometry: OdometryNoise::default(),
            max_time: None,
            snapshot_every_m: default_snapshot_every(),
        }
    }

    /// Lost-robot protocol: 3000 particles over a 100 m disc, yaw in [0, 2π).
    pub fn localization(mission_id: u8, frontends: Frontends, seeds: Vec<u64>) -> Self {
        Self::base(Mode::Localization, mission_id, frontends, seeds)
    }

    /// Known-start protocol: 1500 particles within 1 m, yaw within ±π/20.
    pub fn tracking(mission_id: u8, frontends: Frontends, seeds: Vec<u64>) -> Self {
        Self::base(Mode::Tracking, mission_id, frontends, seeds)
    }

    pub fn particle_count(&self) -> usize {
        self.particles.unwrap_or(match self.mode {
            Mode::Localization => 3000,
            Mode::Tracking => 1500,
        })
    }

    pub fn radius(&self) -> f64 {
        self.init_radius.unwrap_or(match self.mode {
            Mode::Localization => 100.0,
            Mode::Tracking => 1.0,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("parse failure: {e}")))
    }

    /// Reads a config; a relative map path is rewritten against the config's
    /// directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })?;
        if let Some(MapSource::Path(p)) = &mut cfg.map {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn load_world(&self) -> Result<WorldMap> {
        match &self.map {
            None => Ok(WorldMap::inspection_plant()),
            Some(MapSource::Path(p)) => load_map(p),
            Some(MapSource::Inline(doc)) => WorldMap::from_file_doc(doc.clone()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.particle_count() == 0 {
            return Err(Error::Config("particles must be > 0".into()));
        }
        if !(self.radius() > 0.0) {
            return Err(Error::Config("init_radius must be > 0".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if !(self.success.position > 0.0 && self.success.yaw.is_none_or(|y| y > 0.0)) {
            return Err(Error::Config("success thresholds must be > 0".into()));
        }
        if !(1..=3).contains(&self.mission_id) && self.mission.waypoints.is_none() {
            return Err(Error::Config(format!(
                "mission_id must be 1, 2 or 3 (got {})",
                self.mission_id
            )));
        }
        if !(self.yaw_perturbation >= 0.0) {
            return Err(Error::Config("yaw_perturbation must be >= 0".into()));
        }
        if self.snapshot_every_m == 0 {
            return Err(Error::Config("snapshot_every_m must be >= 1".into()));
        }
        if let Some(t) = self.max_time {
            if !(t >= 0.0) {
                return Err(Error::Config("max_time must be >= 0".into()));
            }
        }
        self.detector.validate()?;
        self.filter.validate()?;
        self.mission.validate()?;
        self.odometry.validate()
    }
}
