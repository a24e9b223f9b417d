//! Global localization of an inspection AUV from forward-looking sonar
//! detections of known assets.
//!
//! The pipeline is a particle filter over SE(2) whose weights are driven by
//! two sonar frontends: an oriented-box asset detector and a place
//! recognizer that names the quadrant around the asset being observed. The
//! frontends are emulated from ground truth, and [`mission`] plus
//! [`harness`] drive inspection missions end to end.

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angle;
pub mod error;
pub mod filter;
pub mod frontend;
pub mod harness;
pub mod mission;
pub mod sonar;
pub mod world;

pub use error::{Error, Result};
pub use filter::{ControlInput, FilterConfig, Particle, ParticleSet};
pub use frontend::{DetectorNoise, ObbDetection, RegionObservation, SonarFrame};
pub use sonar::{PixelCoord, Point3, SonarParams, Spherical};
pub use world::{AssetPose, Pose2, RegionId, WorldMap};
