//! Reflection in a vertical mirror cylinder.
//!
//! A vertical cylinder has a horizontal normal everywhere, so reflection
//! leaves the vertical component of a ray untouched and acts on the
//! horizontal projection exactly like a 2D circular mirror. Everything in
//! this module leans on that split: azimuths come from a planar Alhazen
//! problem, heights from straight-line interpolation along the unfolded path.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::OpticsError;
use crate::geometry::{reflect, Vec3};
use crate::roots::bisect_secant;

/// Tolerance used when checking that a point lies on the mirror.
const ON_SURFACE_TOL: f64 = 1e-9;
/// Azimuth tolerance of the reflection-point solver.
const AZIMUTH_TOL: f64 = 1e-12;
/// Sub-brackets scanned for alignment roots.
const ALHAZEN_SCAN: usize = 16;

/// Where a horizontal eye distance is measured from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DistanceOrigin {
    /// From the mirror surface facing the observer.
    #[default]
    Surface,
    /// From the cylinder axis.
    Axis,
}

/// Observer and mirror geometry. Immutable once built.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub eye: Vec3,
    pub radius: f64,
    pub cylinder_height: f64,
}

impl Scene {
    pub const DEFAULT_RADIUS: f64 = 0.025;
    pub const DEFAULT_EYE_DISTANCE: f64 = 0.25;
    pub const DEFAULT_EYE_HEIGHT: f64 = 0.40;
    pub const DEFAULT_CYLINDER_HEIGHT: f64 = 0.25;

    pub fn new(eye: Vec3, radius: f64, cylinder_height: f64) -> Result<Self, OpticsError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(OpticsError::InvalidInput(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if !(cylinder_height > 0.0) {
            return Err(OpticsError::InvalidInput(format!(
                "cylinder height must be positive, got {cylinder_height}"
            )));
        }
        if !eye.is_finite() || eye.z <= 0.0 {
            return Err(OpticsError::InvalidInput(
                "eye must be above the table".into(),
            ));
        }
        if eye.x * eye.x + eye.y * eye.y <= radius * radius {
            return Err(OpticsError::InvalidInput(
                "eye must be outside the cylinder".into(),
            ));
        }
        Ok(Scene {
            eye,
            radius,
            cylinder_height,
        })
    }

    /// Eye on the `+x` axis at horizontal `distance` and `height` above the table.
    pub fn with_eye_distance(
        radius: f64,
        distance: f64,
        height: f64,
        origin: DistanceOrigin,
        cylinder_height: f64,
    ) -> Result<Self, OpticsError> {
        let x = match origin {
            DistanceOrigin::Surface => radius + distance,
            DistanceOrigin::Axis => distance,
        };
        Scene::new(Vec3::new(x, 0.0, height), radius, cylinder_height)
    }

    /// A 5 cm tube viewed from 25 cm in front of its surface and 40 cm up.
    pub fn standard() -> Self {
        Scene {
            eye: Vec3::new(
                Self::DEFAULT_RADIUS + Self::DEFAULT_EYE_DISTANCE,
                0.0,
                Self::DEFAULT_EYE_HEIGHT,
            ),
            radius: Self::DEFAULT_RADIUS,
            cylinder_height: Self::DEFAULT_CYLINDER_HEIGHT,
        }
    }

    #[inline]
    pub fn surface_point(&self, azimuth: f64, z: f64) -> Vec3 {
        Vec3::new(self.radius * azimuth.cos(), self.radius * azimuth.sin(), z)
    }

    #[inline]
    pub fn normal(azimuth: f64) -> Vec3 {
        Vec3::new(azimuth.cos(), azimuth.sin(), 0.0)
    }

    /// Azimuth of the eye around the cylinder axis.
    pub fn eye_azimuth(&self) -> f64 {
        self.eye.y.atan2(self.eye.x)
    }

    /// Half-angle of the arc of the mirror visible from the eye.
    pub fn visible_half_angle(&self) -> f64 {
        (self.radius / self.eye.horizontal().norm()).acos()
    }

    fn check_on_surface(&self, p: Vec3) -> Result<f64, OpticsError> {
        let rho = p.horizontal().norm();
        if (rho - self.radius).abs() > ON_SURFACE_TOL {
            return Err(OpticsError::InvalidInput(format!(
                "point is {} m off the mirror surface",
                (rho - self.radius).abs()
            )));
        }
        Ok(p.y.atan2(p.x))
    }

    /// Chief ray from the eye to mirror point `p` and its reflection to the table.
    pub fn sight_line(&self, p: Vec3) -> Result<SightLine, OpticsError> {
        let azimuth = self.check_on_surface(p)?;
        let normal = Self::normal(azimuth);
        let to_eye = self.eye - p;
        if normal.dot(to_eye.normalized()) <= 1e-12 {
            return Err(OpticsError::DegenerateChiefRay);
        }
        let incident = (p - self.eye).normalized();
        let reflected = reflect(incident, normal).normalized();
        let table = if p.z == 0.0 {
            p
        } else {
            if reflected.z >= -1e-15 || p.z < 0.0 {
                return Err(OpticsError::NoTableHit);
            }
            let t = -p.z / reflected.z;
            let mut hit = p + reflected * t;
            hit.z = 0.0;
            hit
        };
        Ok(SightLine {
            point: p,
            azimuth,
            normal,
            incident,
            reflected,
            table,
        })
    }

    /// Table point seen at mirror point `p`.
    pub fn trace_to_table(&self, p: Vec3) -> Result<Vec3, OpticsError> {
        self.sight_line(p).map(|s| s.table)
    }

    /// Mirror point whose reflection carries the eye's line of sight to table point `t`.
    pub fn solve_reflection_point(&self, t: Vec3) -> Result<Vec3, OpticsError> {
        if t.z.abs() > 1e-12 {
            return Err(OpticsError::InvalidInput(
                "table point must have z = 0".into(),
            ));
        }
        if t.horizontal().norm() <= self.radius {
            return Err(OpticsError::NoSolution);
        }
        let p = solve_reflection(self.radius, self.eye, Vec3::new(t.x, t.y, 0.0))?;
        if p.z < 0.0 || p.z > self.cylinder_height {
            return Err(OpticsError::NoSolution);
        }
        Ok(p)
    }

    /// Whether the straight line from the eye to table point `t` passes
    /// through the tube.
    pub fn occludes(&self, t: Vec3) -> bool {
        let (e, r2) = (self.eye, self.radius * self.radius);
        let d = t - e;
        let a = d.x * d.x + d.y * d.y;
        if a == 0.0 {
            return e.x * e.x + e.y * e.y <= r2;
        }
        // closest approach of the horizontal projection, clamped to the segment
        let s = (-(e.x * d.x + e.y * d.y) / a).clamp(0.0, 1.0);
        let q = e + d * s;
        if q.x * q.x + q.y * q.y > r2 {
            return false;
        }
        // Segment enters the infinite cylinder; check the entry height.
        let b = e.x * d.x + e.y * d.y;
        let c = e.x * e.x + e.y * e.y - r2;
        let disc = b * b - a * c;
        if disc <= 0.0 {
            return false;
        }
        let s_in = (-b - disc.sqrt()) / a;
        let z_in = e.z + d.z * s_in;
        (0.0..=1.0).contains(&s_in) && z_in <= self.cylinder_height
    }

    /// The tangential (H) and sagittal (V) virtual images of `source`, seen
    /// by the eye at mirror point `p`.
    pub fn image_pair(&self, p: Vec3, source: Vec3) -> Result<ImagePair, OpticsError> {
        let azimuth = self.check_on_surface(p)?;
        let normal = Self::normal(azimuth);
        let incident = (p - self.eye).normalized();
        let horiz = incident.horizontal();
        let horiz_len = horiz.norm();
        if horiz_len < 1e-12 {
            return Err(OpticsError::DegenerateChiefRay);
        }
        let cos_inc = -normal.dot(horiz) / horiz_len;
        if cos_inc <= 1e-9 {
            return Err(OpticsError::DegenerateChiefRay);
        }

        // Sagittal fan: the mirror is straight vertically, so it acts as the
        // tangent plane.
        let v_point = source - normal * (2.0 * (source - p).dot(normal));
        let v_distance = (v_point - p).norm();

        // Tangential fan: convex circle of radius R at oblique incidence,
        // focal length (R/2) cos θ in the horizontal plane.
        let object = (source - p).horizontal().norm();
        let image_h = if object == 0.0 {
            0.0
        } else {
            1.0 / (1.0 / object + 2.0 / (self.radius * cos_inc))
        };
        let h_distance = image_h / horiz_len;
        let h_point = p + incident * h_distance;

        Ok(ImagePair {
            h_point,
            v_point,
            h_distance,
            v_distance,
        })
    }

    /// Image pair of whatever table point is seen at `p`.
    pub fn table_image_pair(&self, p: Vec3) -> Result<ImagePair, OpticsError> {
        let t = self.trace_to_table(p)?;
        self.image_pair(p, t)
    }

    /// H image of the table reflected at `(azimuth, z)`; the point on the
    /// tangential virtual surface.
    pub fn h_surface_point(&self, azimuth: f64, z: f64) -> Result<Vec3, OpticsError> {
        self.table_image_pair(self.surface_point(azimuth, z))
            .map(|pair| pair.h_point)
    }

    /// Samples the H virtual surface on an azimuth × height grid.
    ///
    /// Output order is row-major in `(height, azimuth)` regardless of how the
    /// work is split across threads.
    pub fn virtual_surface(&self, azimuths: &[f64], heights: &[f64]) -> VirtualSurface {
        let samples: Vec<SurfaceSample> = heights
            .par_iter()
            .flat_map_iter(|&z| {
                azimuths.iter().map(move |&azimuth| SurfaceSample {
                    azimuth,
                    z,
                    point: self.h_surface_point(azimuth, z).ok(),
                })
            })
            .collect();
        let skipped = samples.iter().filter(|s| s.point.is_none()).count();
        VirtualSurface {
            azimuths: azimuths.to_vec(),
            heights: heights.to_vec(),
            samples,
            skipped,
        }
    }
}

impl Default for Scene {
    fn default() -> Self {
        Scene::standard()
    }
}

/// A line of sight and its reflection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SightLine {
    pub point: Vec3,
    pub azimuth: f64,
    pub normal: Vec3,
    /// Unit direction from the eye towards the mirror.
    pub incident: Vec3,
    /// Unit direction after reflection.
    pub reflected: Vec3,
    /// Where the reflected ray lands on the table.
    pub table: Vec3,
}

/// Tangential and sagittal virtual images along one chief ray.
///
/// Distances are measured from the mirror point, behind the mirror along the
/// continuation of the eye's line of sight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ImagePair {
    pub h_point: Vec3,
    pub v_point: Vec3,
    pub h_distance: f64,
    pub v_distance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfaceSample {
    pub azimuth: f64,
    pub z: f64,
    pub point: Option<Vec3>,
}

/// Sampled tangential virtual surface.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VirtualSurface {
    pub azimuths: Vec<f64>,
    pub heights: Vec<f64>,
    /// Row-major, one row per height.
    pub samples: Vec<SurfaceSample>,
    pub skipped: usize,
}

impl VirtualSurface {
    pub fn row(&self, height_index: usize) -> &[SurfaceSample] {
        let n = self.azimuths.len();
        &self.samples[height_index * n..(height_index + 1) * n]
    }
}

fn wrap_angle(a: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut a = a % two_pi;
    if a > std::f64::consts::PI {
        a -= two_pi;
    } else if a <= -std::f64::consts::PI {
        a += two_pi;
    }
    a
}

/// Horizontal alignment residual at azimuth `phi`: zero when the mirror
/// normal bisects the directions towards `a` and `b`.
fn alignment(radius: f64, a: Vec3, b: Vec3, phi: f64) -> f64 {
    let n = Scene::normal(phi);
    let p = Vec3::new(radius * phi.cos(), radius * phi.sin(), 0.0);
    let ua = (a.horizontal() - p).normalized();
    let ub = (b.horizontal() - p).normalized();
    (n.x * ua.y - n.y * ua.x) + (n.x * ub.y - n.y * ub.x)
}

/// Reflection point on the cylinder of `radius` linking points `a` and `b`
/// (either may be at any height).
///
/// Only first-surface reflections seen from both points count. If several
/// azimuth roots qualify, the shortest total path wins.
pub fn solve_reflection(radius: f64, a: Vec3, b: Vec3) -> Result<Vec3, OpticsError> {
    let rho_a = a.horizontal().norm();
    let rho_b = b.horizontal().norm();
    if rho_a <= radius || rho_b <= radius {
        return Err(OpticsError::NoSolution);
    }
    let az_a = a.y.atan2(a.x);
    let az_b = b.y.atan2(b.x);
    let half_a = (radius / rho_a).acos();
    let half_b = (radius / rho_b).acos();
    let delta = wrap_angle(az_b - az_a);
    let lo = (-half_a).max(delta - half_b);
    let hi = half_a.min(delta + half_b);
    if hi - lo <= 1e-12 {
        return Err(OpticsError::NoSolution);
    }

    let f = |rel: f64| alignment(radius, a, b, az_a + rel);
    let width = hi - lo;
    let inset = 1e-9 * width;
    let mut nodes = Vec::with_capacity(ALHAZEN_SCAN + 1);
    for k in 0..=ALHAZEN_SCAN {
        let x = lo + inset + (width - 2.0 * inset) * k as f64 / ALHAZEN_SCAN as f64;
        nodes.push((x, f(x)));
    }
    let mut best: Option<(f64, Vec3)> = None;
    for w in nodes.windows(2) {
        let ((x0, f0), (x1, f1)) = (w[0], w[1]);
        if f0 == 0.0 || f0.signum() != f1.signum() {
            let Some(rel) = bisect_secant(f, x0, x1, AZIMUTH_TOL) else {
                continue;
            };
            let phi = az_a + rel;
            let n = Scene::normal(phi);
            let p_h = Vec3::new(radius * phi.cos(), radius * phi.sin(), 0.0);
            if n.dot(a.horizontal() - p_h) <= 0.0 || n.dot(b.horizontal() - p_h) <= 0.0 {
                continue;
            }
            let s_a = (a.horizontal() - p_h).norm();
            let s_b = (b.horizontal() - p_h).norm();
            let z = a.z + (b.z - a.z) * s_a / (s_a + s_b);
            let p = Vec3::new(p_h.x, p_h.y, z);
            let length = a.distance(p) + p.distance(b);
            if best.is_none_or(|(l, _)| length < l) {
                best = Some((length, p));
            }
        }
    }
    best.map(|(_, p)| p).ok_or(OpticsError::NoSolution)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn front_generator_table_hit() {
        let scene = Scene::standard();
        let t = scene.trace_to_table(Vec3::new(0.025, 0.0, 0.08)).unwrap();
        assert!((t - Vec3::new(0.0875, 0.0, 0.0)).norm() < 1e-15, "{t:?}");
    }

    #[test]
    fn table_level_point_is_fixed() {
        let scene = Scene::standard();
        let p = Vec3::new(0.025, 0.0, 0.0);
        assert_eq!(scene.trace_to_table(p).unwrap(), p);
    }

    #[test]
    fn silhouette_is_rejected() {
        let scene = Scene::standard();
        let phi = scene.visible_half_angle();
        let p = scene.surface_point(phi, 0.05);
        assert!(matches!(
            scene.sight_line(p),
            Err(OpticsError::DegenerateChiefRay)
        ));
        let p = scene.surface_point(std::f64::consts::PI, 0.05);
        assert!(scene.sight_line(p).is_err());
    }

    #[test]
    fn point_above_eye_never_reaches_table() {
        let scene = Scene::new(Vec3::new(0.3, 0.0, 0.1), 0.025, 0.25).unwrap();
        assert!(matches!(
            scene.trace_to_table(Vec3::new(0.025, 0.0, 0.2)),
            Err(OpticsError::NoTableHit)
        ));
    }

    #[test]
    fn off_surface_point_is_invalid() {
        let scene = Scene::standard();
        assert!(matches!(
            scene.trace_to_table(Vec3::new(0.03, 0.0, 0.05)),
            Err(OpticsError::InvalidInput(_))
        ));
    }

    #[test]
    fn inverse_on_axis_uses_vertical_relation() {
        let scene = Scene::standard();
        let t = Vec3::new(0.0875, 0.0, 0.0);
        let p = scene.solve_reflection_point(t).unwrap();
        assert!((p - Vec3::new(0.025, 0.0, 0.08)).norm() < 1e-12, "{p:?}");
        // z_P = eye.z * s2 / (s1 + s2)
        let (s1, s2) = (0.25, 0.0625);
        assert!((p.z - 0.40 * s2 / (s1 + s2)).abs() < 1e-15);
    }

    #[test]
    fn inverse_off_axis_round_trips() {
        let scene = Scene::standard();
        let t = Vec3::new(0.06, 0.05, 0.0);
        let p = scene.solve_reflection_point(t).unwrap();
        assert!(p.y > 0.0);
        let back = scene.trace_to_table(p).unwrap();
        assert!((back - t).norm() < 1e-9, "{:e}", (back - t).norm());
    }

    #[test]
    fn hidden_points_have_no_solution() {
        let scene = Scene::standard();
        assert!(scene
            .solve_reflection_point(Vec3::new(-0.1, 0.0, 0.0))
            .is_err());
        assert!(scene
            .solve_reflection_point(Vec3::new(0.01, 0.0, 0.0))
            .is_err());
        assert!(scene.occludes(Vec3::new(-0.1, 0.0, 0.0)));
        assert!(!scene.occludes(Vec3::new(0.1, 0.0, 0.0)));
        // Behind but far to the side: visible past the tube.
        assert!(!scene.occludes(Vec3::new(-0.1, 0.2, 0.0)));
    }

    #[test]
    fn too_high_reflection_is_rejected() {
        let scene = Scene::standard();
        // Reflection would need z_P above the 25 cm tube.
        let p = scene.surface_point(0.0, 0.3);
        let t = scene.trace_to_table(p).unwrap();
        assert!(matches!(
            scene.solve_reflection_point(t),
            Err(OpticsError::NoSolution)
        ));
    }

    #[test]
    fn v_image_of_table_point_stays_on_table() {
        let scene = Scene::standard();
        let p = scene.surface_point(0.4, 0.07);
        let pair = scene.table_image_pair(p).unwrap();
        assert_eq!(pair.v_point.z, 0.0);
        assert!(pair.h_distance < pair.v_distance);
    }

    #[test]
    fn distant_eye_gives_half_radius_depth() {
        let scene = Scene::new(Vec3::new(1e6 * 0.025, 0.0, 0.4), 0.025, 1e9).unwrap();
        // Source very far away along the reflected ray: the paraxial focus.
        let p = scene.surface_point(0.0, 0.2);
        let far = Vec3::new(1e9, 0.0, 0.0);
        let pair = scene.image_pair(p, far).unwrap();
        assert!((pair.h_point.x - 0.0125).abs() < 1e-9, "{:?}", pair.h_point);
    }

    #[test]
    fn surface_is_monotone_on_front_generator() {
        let scene = Scene::standard();
        let heights: Vec<f64> = (1..=20).map(|k| 0.01 * k as f64).collect();
        let surf = scene.virtual_surface(&[0.0], &heights);
        assert_eq!(surf.skipped, 0);
        let depths: Vec<f64> = surf
            .samples
            .iter()
            .map(|s| scene.radius - s.point.unwrap().x)
            .collect();
        assert!(depths.windows(2).all(|w| w[1] > w[0]), "{depths:?}");
    }

    #[test]
    fn scene_validation() {
        assert!(Scene::new(Vec3::new(0.01, 0.0, 0.4), 0.025, 0.2).is_err());
        assert!(Scene::new(Vec3::new(0.3, 0.0, -0.1), 0.025, 0.2).is_err());
        assert!(Scene::new(Vec3::new(0.3, 0.0, 0.4), 0.0, 0.2).is_err());
        let s = Scene::with_eye_distance(0.025, 0.25, 0.4, DistanceOrigin::Axis, 0.25).unwrap();
        assert_eq!(s.eye.x, 0.25);
        let s = Scene::with_eye_distance(0.025, 0.25, 0.4, DistanceOrigin::Surface, 0.25).unwrap();
        assert_eq!(s.eye.x, 0.275);
    }
}
