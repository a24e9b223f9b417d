//! Forward-looking sonar geometry.
//!
//! The sonar frame has +x forward along the boresight, +y to starboard and
//! +z up. A multibeam image keeps only range and bearing: every point on the
//! elevation arc through a given `(R, θ)` lands on the same pixel.

use serde::{Deserialize, Serialize};

use crate::angle::normalize_angle;
use crate::error::{Error, Result};

/// Cartesian point in the sonar frame, metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Range / bearing / elevation triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spherical {
    pub range: f64,
    /// Bearing from the boresight toward starboard, in (−π, π].
    pub bearing: f64,
    /// Elevation above the horizontal plane, in (−π/2, π/2).
    pub elevation: f64,
}

/// Continuous image coordinates. `u` runs across the fan, `v` runs from the
/// far edge (`v = 0` at `R_max`) toward the sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelCoord {
    pub u: f64,
    pub v: f64,
}

impl PixelCoord {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn distance_squared(&self, other: &PixelCoord) -> f64 {
        let du = self.u - other.u;
        let dv = self.v - other.v;
        du * du + dv * dv
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawSonarParams {
    r_max: f64,
    fov: f64,
    width: u32,
    height: u32,
}

/// Sensor parameters. The pixel scale `beta` is derived on construction and
/// cannot drift from the other fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSonarParams", into = "RawSonarParams")]
pub struct SonarParams {
    r_max: f64,
    fov: f64,
    width: u32,
    height: u32,
    beta: f64,
}

impl TryFrom<RawSonarParams> for SonarParams {
    type Error = Error;

    fn try_from(raw: RawSonarParams) -> Result<Self> {
        SonarParams::new(raw.r_max, raw.fov, raw.width, raw.height)
    }
}

impl From<SonarParams> for RawSonarParams {
    fn from(p: SonarParams) -> Self {
        RawSonarParams {
            r_max: p.r_max,
            fov: p.fov,
            width: p.width,
            height: p.height,
        }
    }
}

impl Default for SonarParams {
    /// Tritech Gemini 720i as configured in simulation: 20 m, 120°, 440×512.
    fn default() -> Self {
        SonarParams::new(20.0, 120f64.to_radians(), 440, 512).expect("valid default")
    }
}

impl SonarParams {
    pub fn new(r_max: f64, fov: f64, width: u32, height: u32) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidSonar(format!(
                "r_max must be > 0, got {r_max}"
            )));
        }
        if !(fov > 0.0 && fov < std::f64::consts::PI) {
            return Err(Error::InvalidSonar(format!(
                "fov must lie in (0, π) radians, got {fov}"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidSonar(format!(
                "image must be non-empty, got {width}x{height}"
            )));
        }
        Ok(SonarParams {
            r_max,
            fov,
            width,
            height,
            beta: scale_factor(f64::from(width), r_max, fov),
        })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn fov(&self) -> f64 {
        self.fov
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Pixels per metre.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn in_image(&self, c: &PixelCoord) -> bool {
        in_image(c, self)
    }
}

/// `W / (2 R_max sin(FoV/2))`: the fan's chord at maximum range spans the
/// full image width.
pub fn scale_factor(width: f64, r_max: f64, fov: f64) -> f64 {
    width / (2.0 * r_max * (fov / 2.0).sin())
}

pub fn cartesian_to_spherical(p: Point3) -> Result<Spherical> {
    let range = p.norm();
    if range == 0.0 || !range.is_finite() {
        return Err(Error::ZeroRange);
    }
    let planar = p.x.hypot(p.y);
    Ok(Spherical {
        range,
        bearing: normalize_angle(p.y.atan2(p.x)),
        elevation: p.z.atan2(planar),
    })
}

pub fn spherical_to_cartesian(s: Spherical) -> Point3 {
    let (sin_t, cos_t) = s.bearing.sin_cos();
    let (sin_p, cos_p) = s.elevation.sin_cos();
    Point3 {
        x: s.range * cos_t * cos_p,
        y: s.range * sin_t * cos_p,
        z: s.range * sin_p,
    }
}

/// Projects a sonar-frame point onto the image plane.
///
/// Uses `y/cosφ` and `x/cosφ` in the form `y·R/ρ` (ρ the planar norm), so a
/// point with `y = 0` lands exactly on the centre column. Points outside the
/// image are still returned; see [`in_image`].
pub fn project_point(p: Point3, params: &SonarParams) -> Result<PixelCoord> {
    let range = p.norm();
    if range == 0.0 {
        return Err(Error::ZeroRange);
    }
    let planar = p.x.hypot(p.y);
    if planar == 0.0 {
        return Err(Error::DegenerateProjection);
    }
    let stretch = range / planar;
    let beta = params.beta;
    Ok(PixelCoord {
        u: beta * (p.y * stretch) + f64::from(params.width) / 2.0,
        v: beta * (params.r_max - p.x * stretch),
    })
}

pub fn in_image(c: &PixelCoord, params: &SonarParams) -> bool {
    c.u >= 0.0 && c.u < f64::from(params.width) && c.v >= 0.0 && c.v < f64::from(params.height)
}
