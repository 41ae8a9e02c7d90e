//! Concrete ray families used throughout the crate.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{PlanarRayFamily, RayFamily};
use crate::error::OpticsError;
use crate::geometry::{
    intersect_cylinder, intersect_plane, reflect, refract, transverse_basis, Interface, Ray, Vec3,
};

/// Light source for a planar family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Source {
    /// Parallel beam travelling along the given direction.
    Direction(Vec3),
    Point(Vec3),
}

/// Rays from a source reflected off the inside of a circular mirror centred
/// at the origin, parametrized by the angular offset of the reflection point
/// from the middle of the lit arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleReflection {
    pub radius: f64,
    pub source: Source,
    center: f64,
    half_width: f64,
}

impl CircleReflection {
    pub fn new(radius: f64, source: Source) -> Self {
        let (center, half_width) = match source {
            Source::Direction(d) => (d.y.atan2(d.x), FRAC_PI_2),
            Source::Point(s) => {
                let rho = s.horizontal().norm();
                let az = s.y.atan2(s.x);
                if rho > radius {
                    (az + PI, PI - (radius / rho).acos())
                } else {
                    (az + PI, PI)
                }
            }
        };
        CircleReflection {
            radius,
            source,
            center,
            half_width,
        }
    }

    pub fn parallel(radius: f64, direction: Vec3) -> Self {
        Self::new(radius, Source::Direction(direction.normalized()))
    }

    pub fn point(radius: f64, source: Vec3) -> Self {
        Self::new(radius, Source::Point(source))
    }

    /// Absolute polar angle of the reflection point for parameter `u`.
    pub fn hit_angle(&self, u: f64) -> f64 {
        self.center + u
    }

    /// Incoming ray that reflects at parameter `u`.
    pub fn incoming(&self, u: f64) -> Result<Ray, OpticsError> {
        let psi = self.hit_angle(u);
        let p = Vec3::new(self.radius * psi.cos(), self.radius * psi.sin(), 0.0);
        let d = match self.source {
            Source::Direction(d) => d,
            Source::Point(s) => {
                let d = p - s;
                if d.norm() == 0.0 {
                    return Err(OpticsError::DegenerateParameter(u));
                }
                d.normalized()
            }
        };
        let origin = match self.source {
            Source::Direction(_) => p - d * (2.0 * self.radius),
            Source::Point(s) => s,
        };
        Ok(Ray::new(origin, d))
    }
}

impl PlanarRayFamily for CircleReflection {
    fn ray(&self, u: f64) -> Result<Ray, OpticsError> {
        let psi = self.hit_angle(u);
        let n = Vec3::new(psi.cos(), psi.sin(), 0.0);
        let p = n * self.radius;
        let d = self.incoming(u)?.direction;
        if d.dot(n) <= 0.0 {
            return Err(OpticsError::DegenerateParameter(u));
        }
        Ok(Ray::new(p, reflect(d, n)))
    }

    fn domain(&self) -> (f64, f64) {
        (-self.half_width, self.half_width)
    }
}

/// Far intersection of a chord starting on a circle centred at the origin.
fn chord_end(origin: Vec3, dir: Vec3) -> Vec3 {
    let a = dir.x * dir.x + dir.y * dir.y;
    let t = -2.0 * (origin.x * dir.x + origin.y * dir.y) / a;
    origin + dir * t
}

/// Exit rays of a circular drop after one internal reflection. Sunlight
/// travels along `-x`; the parameter is the impact height `b` in units of the
/// drop radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RaindropExit {
    pub n: f64,
    pub radius: f64,
}

impl RaindropExit {
    /// Entry point, first internal hit and exit point for impact height `b`.
    pub fn path(&self, b: f64) -> Result<[Vec3; 3], OpticsError> {
        if !(b.abs() < 1.0) {
            return Err(OpticsError::DegenerateParameter(b));
        }
        let r = self.radius;
        let sun = -Vec3::X;
        let entry = Vec3::new(r * (1.0 - b * b).sqrt(), r * b, 0.0);
        let into = Interface {
            n_incident: 1.0,
            n_transmitted: self.n,
        };
        let inside = refract(sun, entry / r, into)?;
        let back = chord_end(entry, inside);
        let reflected = reflect(inside, back / r);
        let exit = chord_end(back, reflected);
        Ok([entry, back, exit])
    }
}

impl PlanarRayFamily for RaindropExit {
    fn ray(&self, b: f64) -> Result<Ray, OpticsError> {
        let [_, back, exit] = self.path(b)?;
        let inside = (exit - back).normalized();
        let out = refract(
            inside,
            exit / self.radius,
            Interface {
                n_incident: self.n,
                n_transmitted: 1.0,
            },
        )?;
        Ok(Ray::new(exit, out))
    }

    fn domain(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }
}

/// Small cone of rays leaving `source` around `chief`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Cone {
    source: Vec3,
    chief: Vec3,
    e1: Vec3,
    e2: Vec3,
}

impl Cone {
    fn new(source: Vec3, toward: Vec3) -> Self {
        let chief = (toward - source).normalized();
        let (e1, e2) = transverse_basis(chief);
        Cone {
            source,
            chief,
            e1,
            e2,
        }
    }

    fn ray(&self, [a, b]: [f64; 2]) -> Ray {
        Ray::new(self.source, self.chief + self.e1 * a + self.e2 * b)
    }
}

/// Rays from a point source reflected once by the outside of a vertical
/// cylinder of the given radius; parameters are the two transverse slopes
/// of the ray leaving the source (the first one horizontal).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderMirrorFamily {
    radius: f64,
    cone: Cone,
}

impl CylinderMirrorFamily {
    /// Family whose chief ray goes from `source` to mirror point `mirror_point`.
    pub fn new(radius: f64, source: Vec3, mirror_point: Vec3) -> Self {
        CylinderMirrorFamily {
            radius,
            cone: Cone::new(source, mirror_point),
        }
    }
}

impl RayFamily for CylinderMirrorFamily {
    fn ray(&self, params: [f64; 2]) -> Result<Ray, OpticsError> {
        let incoming = self.cone.ray(params);
        let hit = intersect_cylinder(&incoming, self.radius)?;
        if hit.normal.dot(incoming.direction) >= 0.0 {
            return Err(OpticsError::NoHit);
        }
        Ok(Ray::new(hit.point, reflect(incoming.direction, hit.normal)))
    }
}

/// Rays from a submerged point source refracted into air at the plane
/// `z = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaterSurfaceFamily {
    iface: Interface,
    cone: Cone,
}

impl WaterSurfaceFamily {
    /// Family whose chief ray goes from `source` to the surface point `crossing`.
    pub fn new(n_water: f64, source: Vec3, crossing: Vec3) -> Self {
        WaterSurfaceFamily {
            iface: Interface {
                n_incident: n_water,
                n_transmitted: 1.0,
            },
            cone: Cone::new(source, crossing),
        }
    }
}

impl RayFamily for WaterSurfaceFamily {
    fn ray(&self, params: [f64; 2]) -> Result<Ray, OpticsError> {
        let incoming = self.cone.ray(params);
        let hit = intersect_plane(&incoming)?;
        let out = refract(incoming.direction, Vec3::Z, self.iface)?;
        Ok(Ray::new(hit, out))
    }
}
