//! Points, geodesic distance and spherical caps on the unit sphere.

use std::f64::consts::PI;
use std::ops::Index;

use crate::error::{Error, Result};

/// A point on the unit sphere, stored in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVec {
    pub const NORTH: UnitVec = UnitVec { x: 0.0, y: 0.0, z: 1.0 };
    pub const SOUTH: UnitVec = UnitVec { x: 0.0, y: 0.0, z: -1.0 };

    /// Scales `(x, y, z)` onto the sphere. Fails on zero or non-finite input.
    pub fn normalize(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidInput(format!(
                "cannot normalize vector ({x}, {y}, {z})"
            )));
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// From geographic latitude/longitude in degrees.
    pub fn from_lat_lon_deg(lat: f64, lon: f64) -> Result<Self> {
        if !(-90.0..=90.0).contains(&lat) || !lon.is_finite() {
            return Err(Error::InvalidInput(format!(
                "latitude/longitude out of range: ({lat}, {lon})"
            )));
        }
        let (phi, lambda) = (lat.to_radians(), lon.to_radians());
        Self::normalize(phi.cos() * lambda.cos(), phi.cos() * lambda.sin(), phi.sin())
    }

    /// From colatitude `theta` and longitude `phi`, both in radians.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let s = theta.sin();
        Self {
            x: s * phi.cos(),
            y: s * phi.sin(),
            z: theta.cos(),
        }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.z
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(&self, other: &UnitVec) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Dot product clamped to `[-1, 1]`.
    #[inline]
    pub fn cos_angle(&self, other: &UnitVec) -> f64 {
        self.dot(other).clamp(-1.0, 1.0)
    }

    /// Angle from the north pole, in `[0, pi]`.
    #[inline]
    pub fn colatitude(&self) -> f64 {
        self.z.clamp(-1.0, 1.0).acos()
    }

    /// Applies a 3x3 matrix (row-major) and renormalizes. Meant for rotations.
    pub fn transform(&self, m: &[[f64; 3]; 3]) -> Result<Self> {
        let v = self.to_array();
        let row = |r: &[f64; 3]| r[0] * v[0] + r[1] * v[1] + r[2] * v[2];
        Self::normalize(row(&m[0]), row(&m[1]), row(&m[2]))
    }
}

impl Index<usize> for UnitVec {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("UnitVec index {i} out of range"),
        }
    }
}

/// Great-circle distance in radians, in `[0, pi]`.
///
/// Uses `atan2(|u x v|, u . v)`, which equals `arccos(u . v)` but stays
/// accurate for nearly coincident or antipodal points.
#[inline]
pub fn geodesic_distance(u: &UnitVec, v: &UnitVec) -> f64 {
    let cx = u.y * v.z - u.z * v.y;
    let cy = u.z * v.x - u.x * v.z;
    let cz = u.x * v.y - u.y * v.x;
    let sin = (cx * cx + cy * cy + cz * cz).sqrt();
    sin.atan2(u.dot(v)).clamp(0.0, PI)
}

/// The set of points within geodesic `radius` of `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCap {
    center: UnitVec,
    radius: f64,
}

impl SphericalCap {
    pub fn new(center: UnitVec, radius: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&radius) {
            return Err(Error::InvalidInput(format!(
                "cap radius {radius} outside [0, pi]"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> UnitVec {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, p: &UnitVec) -> bool {
        geodesic_distance(&self.center, p) <= self.radius
    }
}
