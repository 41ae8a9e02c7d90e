//! Vector optics primitives in the table frame.
//!
//! The table is the plane `z = 0`, the mirror cylinder stands on it with its
//! axis along `z`, and the observer sits on the `+x` side. Every length is in
//! meters.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::OpticsError;

/// Refractive index of air.
pub const N_AIR: f64 = 1.0;
/// Refractive index of water used throughout.
pub const N_WATER: f64 = 1.333;

/// Absolute tolerance on quadratic discriminants; grazing hits inside it are misses.
pub const INTERSECT_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction. Zero stays zero.
    #[inline]
    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self / n
        }
    }

    /// Projection onto the table plane.
    #[inline]
    pub fn horizontal(self) -> Vec3 {
        Vec3::new(self.x, self.y, 0.0)
    }

    #[inline]
    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Angle between two vectors in radians, robust near 0 and π.
    pub fn angle_to(self, o: Vec3) -> f64 {
        self.cross(o).norm().atan2(self.dot(o))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Distance of `self` from the infinite line through `a` with direction `dir`.
    pub fn distance_to_line(self, a: Vec3, dir: Vec3) -> f64 {
        let d = dir.normalized();
        let w = self - a;
        (w - d * w.dot(d)).norm()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A half-line with unit direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub origin: Vec3,
    pub direction: Vec3,
}

impl Ray {
    /// Builds a ray, normalizing `direction`.
    pub fn new(origin: Vec3, direction: Vec3) -> Self {
        Ray {
            origin,
            direction: direction.normalized(),
        }
    }

    pub fn through(from: Vec3, to: Vec3) -> Self {
        Ray::new(from, to - from)
    }

    #[inline]
    pub fn at(&self, t: f64) -> Vec3 {
        self.origin + self.direction * t
    }
}

/// A boundary between two media.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interface {
    pub n_incident: f64,
    pub n_transmitted: f64,
}

impl Interface {
    pub fn new(n_incident: f64, n_transmitted: f64) -> Result<Self, OpticsError> {
        if !(n_incident >= 1.0 && n_transmitted >= 1.0) {
            return Err(OpticsError::InvalidInput(format!(
                "refractive indices must be >= 1 (got {n_incident}, {n_transmitted})"
            )));
        }
        Ok(Interface {
            n_incident,
            n_transmitted,
        })
    }

    pub fn air_to_water() -> Self {
        Interface {
            n_incident: N_AIR,
            n_transmitted: N_WATER,
        }
    }

    pub fn water_to_air() -> Self {
        Interface {
            n_incident: N_WATER,
            n_transmitted: N_AIR,
        }
    }

    pub fn reversed(self) -> Self {
        Interface {
            n_incident: self.n_transmitted,
            n_transmitted: self.n_incident,
        }
    }

    /// Critical angle of incidence, if the interface can totally reflect.
    pub fn critical_angle(self) -> Option<f64> {
        (self.n_incident > self.n_transmitted)
            .then(|| (self.n_transmitted / self.n_incident).asin())
    }
}

/// Mirror reflection of `d` about the plane with unit normal `n`.
#[inline]
pub fn reflect(d: Vec3, n: Vec3) -> Vec3 {
    d - n * (2.0 * d.dot(n))
}

/// Snell refraction of unit `d` through a surface with unit normal `n`.
///
/// The normal may face either side; it is flipped internally so that it
/// opposes the incoming direction.
pub fn refract(d: Vec3, n: Vec3, iface: Interface) -> Result<Vec3, OpticsError> {
    let n = if d.dot(n) > 0.0 { -n } else { n };
    let cos_i = -d.dot(n);
    let eta = iface.n_incident / iface.n_transmitted;
    let sin2_t = eta * eta * (1.0 - cos_i * cos_i).max(0.0);
    if sin2_t > 1.0 {
        return Err(OpticsError::TotalInternalReflection {
            incidence: cos_i.clamp(-1.0, 1.0).acos(),
        });
    }
    let cos_t = (1.0 - sin2_t).sqrt();
    Ok((d * eta + n * (eta * cos_i - cos_t)).normalized())
}

/// Hit of `r` with the table plane `z = 0` at positive ray parameter.
pub fn intersect_plane(r: &Ray) -> Result<Vec3, OpticsError> {
    let dz = r.direction.z;
    if dz.abs() < INTERSECT_EPS {
        return Err(OpticsError::NoHit);
    }
    let t = -r.origin.z / dz;
    if t <= 0.0 {
        return Err(OpticsError::NoHit);
    }
    let mut p = r.at(t);
    p.z = 0.0;
    Ok(p)
}

/// Point of a cylinder surface together with its outward unit normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderHit {
    pub point: Vec3,
    pub normal: Vec3,
    pub t: f64,
}

/// Nearest positive-parameter hit of `r` with the infinite cylinder
/// `x² + y² = radius²`.
pub fn intersect_cylinder(r: &Ray, radius: f64) -> Result<CylinderHit, OpticsError> {
    let (o, d) = (r.origin, r.direction);
    let a = d.x * d.x + d.y * d.y;
    if a < INTERSECT_EPS {
        return Err(OpticsError::NoHit);
    }
    let b = o.x * d.x + o.y * d.y;
    let c = o.x * o.x + o.y * o.y - radius * radius;
    // Normalized discriminant so the tolerance does not depend on scale.
    let disc = (b * b - a * c) / (a * radius * radius);
    if disc <= INTERSECT_EPS {
        return Err(OpticsError::NoHit);
    }
    let sq = (b * b - a * c).sqrt();
    // Numerically stable roots of a t² + 2 b t + c = 0.
    let q = -(b + b.signum() * sq);
    let (t0, t1) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        let ta = q / a;
        let tb = c / q;
        (ta.min(tb), ta.max(tb))
    };
    let t = if t0 > 0.0 {
        t0
    } else if t1 > 0.0 {
        t1
    } else {
        return Err(OpticsError::NoHit);
    };
    let p = r.at(t);
    let phi = p.y.atan2(p.x);
    let point = Vec3::new(radius * phi.cos(), radius * phi.sin(), p.z);
    Ok(CylinderHit {
        point,
        normal: Vec3::new(phi.cos(), phi.sin(), 0.0),
        t,
    })
}

/// Orthonormal pair spanning the plane perpendicular to unit `d`.
///
/// The first vector is horizontal whenever `d` is not vertical.
pub fn transverse_basis(d: Vec3) -> (Vec3, Vec3) {
    let h = d.cross(Vec3::Z);
    let e1 = if h.norm() < 1e-9 {
        Vec3::X.cross(d).normalized()
    } else {
        h.normalized()
    };
    let e2 = e1.cross(d).normalized();
    (e1, e2)
}
