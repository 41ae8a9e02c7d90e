//! Imaging through a flat air-water surface.
//!
//! The surface is the plane `z = 0` with water below. A submerged point seen
//! from the air has two virtual images on the refracted chief ray: the
//! tangential one (H here, focus of the fan in the plane of incidence) and
//! the sagittal one (V, focus of the fan across it).

use rayon::prelude::*;
use serde::Serialize;

use crate::caustics::families::WaterSurfaceFamily;
use crate::caustics::focal_points_on_chief_ray;
use crate::error::OpticsError;
use crate::geometry::{intersect_plane, refract, Interface, Ray, Vec3, N_WATER};
use crate::roots::bisect;

/// Horizontal tolerance of the chief-ray crossing, meters.
const CROSSING_TOL: f64 = 1e-12;
/// Exact conversion of feet to meters.
pub const FOOT: f64 = 0.3048;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WaterScene {
    pub eye: Vec3,
    /// Depth of a flat floor below the surface.
    pub depth: f64,
    pub n_water: f64,
}

impl WaterScene {
    pub fn new(eye: Vec3, depth: f64, n_water: f64) -> Result<Self, OpticsError> {
        if eye.z == 0.0 || !eye.is_finite() {
            return Err(OpticsError::InvalidInput(
                "eye must not lie on the water surface".into(),
            ));
        }
        if !(depth > 0.0) {
            return Err(OpticsError::InvalidInput(format!(
                "depth must be positive, got {depth}"
            )));
        }
        if !(n_water >= 1.0) {
            return Err(OpticsError::InvalidInput(format!(
                "index must be >= 1, got {n_water}"
            )));
        }
        Ok(WaterScene {
            eye,
            depth,
            n_water,
        })
    }

    /// Observer at `height` above the surface on the z axis, water of index 1.333.
    pub fn standing(height: f64, depth: f64) -> Result<Self, OpticsError> {
        WaterScene::new(Vec3::new(0.0, 0.0, height), depth, N_WATER)
    }

    fn index_at(&self, p: Vec3) -> f64 {
        if p.z < 0.0 {
            self.n_water
        } else {
            1.0
        }
    }
}

/// Surface point where the refracted ray from `a` to `b` crosses `z = 0`.
///
/// `a` and `b` must be on opposite sides. The crossing lies on the segment
/// between their horizontal projections and is found by bisection on the
/// Snell residual, which is monotone there.
pub fn chief_crossing(a: Vec3, n_a: f64, b: Vec3, n_b: f64) -> Result<Vec3, OpticsError> {
    let (ha, hb) = (a.z.abs(), b.z.abs());
    if ha == 0.0 || hb == 0.0 || a.z.signum() == b.z.signum() {
        return Err(OpticsError::NoChiefRay);
    }
    let span = (b - a).horizontal();
    let len = span.norm();
    if len == 0.0 {
        return Ok(Vec3::new(a.x, a.y, 0.0));
    }
    let dir = span / len;
    let residual = |rho: f64| {
        let sin_a = rho / rho.hypot(ha);
        let sin_b = (len - rho) / (len - rho).hypot(hb);
        n_a * sin_a - n_b * sin_b
    };
    let rho = bisect(residual, 0.0, len, CROSSING_TOL).ok_or(OpticsError::NoChiefRay)?;
    let x = a.horizontal() + dir * rho;
    Ok(Vec3::new(x.x, x.y, 0.0))
}

/// Tangential and sagittal images of a submerged point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RefractedImagePair {
    pub h_point: Vec3,
    pub v_point: Vec3,
    /// Where the chief ray leaves the water.
    pub crossing: Vec3,
    /// Signed distances from the crossing along the outgoing chief ray.
    pub t_h: f64,
    pub t_v: f64,
}

impl RefractedImagePair {
    pub fn h_depth(&self) -> f64 {
        -self.h_point.z
    }

    pub fn v_depth(&self) -> f64 {
        -self.v_point.z
    }
}

/// Virtual images of `source` (below the surface) seen from the eye (above).
///
/// The images come from the vanishing-Jacobian scan along the refracted
/// chief ray.
pub fn apparent_point(ws: &WaterScene, source: Vec3) -> Result<RefractedImagePair, OpticsError> {
    if !(source.z < 0.0) || !(ws.eye.z > 0.0) {
        return Err(OpticsError::InvalidInput(
            "source must be under water and eye above".into(),
        ));
    }
    let crossing = chief_crossing(source, ws.n_water, ws.eye, 1.0)?;
    let family = WaterSurfaceFamily::new(ws.n_water, source, crossing);
    let out = (ws.eye - crossing).normalized();
    // The H fan spreads in the plane of incidence.
    let tangential = {
        let t = Vec3::Z - out * out.z;
        if t.norm() < 1e-12 {
            Vec3::X
        } else {
            t.normalized()
        }
    };
    let range = 10.0 * ws.eye.distance(crossing).max(source.distance(crossing));
    let fp = focal_points_on_chief_ray(&family, [0.0, 0.0], tangential, range)?;
    Ok(RefractedImagePair {
        h_point: crossing + out * fp.t_h,
        v_point: crossing + out * fp.t_v,
        crossing,
        t_h: fp.t_h,
        t_v: fp.t_v,
    })
}

/// Closed-form image distances behind the crossing (tangential, sagittal)
/// for a point at distance `s` from the surface along a ray refracted from
/// angle `theta_water` to `theta_air`.
pub fn thin_pencil_distances(s: f64, n_water: f64, theta_water: f64, theta_air: f64) -> (f64, f64) {
    let tangential = s * theta_air.cos().powi(2) / (n_water * theta_water.cos().powi(2));
    let sagittal = s / n_water;
    (tangential, sagittal)
}

/// Which apparent point stands for the floor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FloorImage {
    /// Tangential caustic point.
    H,
    /// Sagittal caustic point.
    V,
    /// Straight continuation of the air ray by the true underwater path length.
    BackProjection,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FloorSample {
    /// Gaze angle below the horizon, radians.
    pub gaze: f64,
    pub floor: Vec3,
    /// Horizontal distance from the observer to the floor point.
    pub floor_distance: f64,
    pub h_point: Vec3,
    pub v_point: Vec3,
    pub back_projection: Vec3,
}

impl FloorSample {
    pub fn image(&self, which: FloorImage) -> Vec3 {
        match which {
            FloorImage::H => self.h_point,
            FloorImage::V => self.v_point,
            FloorImage::BackProjection => self.back_projection,
        }
    }
}

/// Floor point seen along a gaze `gaze` radians below the horizon, looking
/// along `+x` from the eye.
fn floor_hit(ws: &WaterScene, gaze: f64) -> Result<(Vec3, Vec3), OpticsError> {
    let dir = Vec3::new(gaze.cos(), 0.0, -gaze.sin());
    let crossing = intersect_plane(&Ray::new(ws.eye, dir))?;
    let under = refract(
        dir,
        Vec3::Z,
        Interface {
            n_incident: 1.0,
            n_transmitted: ws.n_water,
        },
    )?;
    let t = -ws.depth / under.z;
    Ok((crossing, crossing + under * t))
}

/// One sample of the apparent pool floor.
pub fn floor_sample(ws: &WaterScene, gaze: f64) -> Result<FloorSample, OpticsError> {
    if !(ws.eye.z > 0.0) || !(gaze > 0.0 && gaze < std::f64::consts::FRAC_PI_2 + 1e-12) {
        return Err(OpticsError::InvalidInput(
            "gaze must point down from above the water".into(),
        ));
    }
    let (crossing, floor) = floor_hit(ws, gaze)?;
    let pair = apparent_point(ws, floor)?;
    let dir = (crossing - ws.eye).normalized();
    let back_projection = crossing + dir * crossing.distance(floor);
    Ok(FloorSample {
        gaze,
        floor,
        floor_distance: (floor - ws.eye).horizontal().norm(),
        h_point: pair.h_point,
        v_point: pair.v_point,
        back_projection,
    })
}

/// Apparent pool floor along a list of gaze angles (radians below the horizon).
pub fn pool_floor_profile(ws: &WaterScene, gazes: &[f64]) -> Vec<Result<FloorSample, OpticsError>> {
    gazes.par_iter().map(|&g| floor_sample(ws, g)).collect()
}

/// Local upward slope of the apparent floor, radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FloorSlope {
    /// Rise of the apparent floor per unit horizontal distance of the true
    /// floor point.
    pub along_floor: f64,
    /// Tangent angle of the apparent-floor curve itself.
    pub along_image: f64,
}

pub fn floor_slope(
    ws: &WaterScene,
    gaze: f64,
    which: FloorImage,
) -> Result<FloorSlope, OpticsError> {
    let step = 1e-4;
    let near = floor_sample(ws, gaze + step)?;
    let far = floor_sample(ws, gaze - step)?;
    let (a, b) = (near.image(which), far.image(which));
    let rise = b.z - a.z;
    Ok(FloorSlope {
        along_floor: rise.atan2(far.floor_distance - near.floor_distance),
        along_image: rise.atan2(b.horizontal().norm() - a.horizontal().norm()),
    })
}

/// Apparent shape of a vertical ruler.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RulerImage {
    /// True depths of the samples along the ruler.
    pub depths: Vec<f64>,
    pub h_points: Vec<Vec3>,
    pub v_points: Vec<Vec3>,
    /// Samples with no usable chief ray.
    pub dropped: usize,
}

impl RulerImage {
    /// Largest distance of an H sample from its least-squares line in the
    /// vertical plane through the images.
    pub fn h_max_deviation(&self) -> f64 {
        max_deviation_from_fit(&self.h_points)
    }

    /// Distance of each H sample from the line through the first sample along
    /// the initial direction of the H curve.
    pub fn h_deviation_from_top_tangent(&self) -> Vec<f64> {
        if self.h_points.len() < 2 {
            return vec![0.0; self.h_points.len()];
        }
        let a = self.h_points[0];
        let dir = self.h_points[1] - a;
        self.h_points
            .iter()
            .map(|p| p.distance_to_line(a, dir))
            .collect()
    }

    /// `|h − v|` per sample.
    pub fn separations(&self) -> Vec<f64> {
        self.h_points
            .iter()
            .zip(&self.v_points)
            .map(|(h, v)| h.distance(*v))
            .collect()
    }
}

/// Orthogonal-regression line fit; returns the largest residual.
pub fn max_deviation_from_fit(points: &[Vec3]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mean = points.iter().fold(Vec3::ZERO, |acc, p| acc + *p) / n;
    // Principal direction by power iteration on the scatter matrix.
    let mut dir = (points[points.len() - 1] - points[0]).normalized();
    for _ in 0..100 {
        let mut next = Vec3::ZERO;
        for p in points {
            let w = *p - mean;
            next += w * w.dot(dir);
        }
        let next = next.normalized();
        if (next - dir).norm() < 1e-15 {
            break;
        }
        dir = next;
    }
    points
        .iter()
        .map(|p| p.distance_to_line(mean, dir))
        .fold(0.0, f64::max)
}

/// Images of a vertical ruler standing at horizontal position `foot`
/// (z ignored), submerged to depth `length`, sampled at `samples` points
/// below the surface.
pub fn ruler_apparent_shape(
    ws: &WaterScene,
    foot: Vec3,
    length: f64,
    samples: usize,
) -> RulerImage {
    let depths: Vec<f64> = (1..=samples)
        .map(|k| length * k as f64 / samples as f64)
        .collect();
    let results: Vec<_> = depths
        .par_iter()
        .map(|&d| apparent_point(ws, Vec3::new(foot.x, foot.y, -d)))
        .collect();
    let mut image = RulerImage {
        depths: Vec::new(),
        h_points: Vec::new(),
        v_points: Vec::new(),
        dropped: 0,
    };
    for (d, r) in depths.into_iter().zip(results) {
        match r {
            Ok(pair) => {
                image.depths.push(d);
                image.h_points.push(pair.h_point);
                image.v_points.push(pair.v_point);
            }
            Err(_) => image.dropped += 1,
        }
    }
    image
}

/// Where an underwater eye must aim to hit an aerial target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ArcherAim {
    /// Underwater direction in which the target is seen.
    pub apparent: Vec3,
    /// Straight line from the eye to the target (or, for a target at
    /// infinity, the direction of the light in the air).
    pub true_direction: Vec3,
    /// Angle between the two, radians.
    pub correction: f64,
    /// Angle of the apparent direction from the vertical.
    pub underwater_angle: f64,
}

fn check_window(n_water: f64, angle: f64) -> Result<(), OpticsError> {
    let critical = (1.0 / n_water).asin();
    if angle > critical {
        Err(OpticsError::OutsideSnellsWindow { angle })
    } else {
        Ok(())
    }
}

/// Aim for a target point in the air, seen from an eye under water.
pub fn archer_aim(ws: &WaterScene, target: Vec3) -> Result<ArcherAim, OpticsError> {
    if !(ws.eye.z < 0.0) || !(target.z > 0.0) {
        return Err(OpticsError::InvalidInput(
            "eye must be under water and target above".into(),
        ));
    }
    let crossing = chief_crossing(ws.eye, ws.index_at(ws.eye), target, ws.index_at(target))?;
    let apparent = (crossing - ws.eye).normalized();
    let true_direction = (target - ws.eye).normalized();
    let underwater_angle = apparent.angle_to(Vec3::Z);
    check_window(ws.n_water, underwater_angle)?;
    Ok(ArcherAim {
        apparent,
        true_direction,
        correction: apparent.angle_to(true_direction),
        underwater_angle,
    })
}

/// Aim for a target at infinity seen `underwater_angle` radians from the
/// vertical, in the `xz` plane.
pub fn archer_aim_apparent(n_water: f64, underwater_angle: f64) -> Result<ArcherAim, OpticsError> {
    check_window(n_water, underwater_angle.abs())?;
    let air = (n_water * underwater_angle.sin()).clamp(-1.0, 1.0).asin();
    let apparent = Vec3::new(underwater_angle.sin(), 0.0, underwater_angle.cos());
    let true_direction = Vec3::new(air.sin(), 0.0, air.cos());
    Ok(ArcherAim {
        apparent,
        true_direction,
        correction: apparent.angle_to(true_direction),
        underwater_angle: underwater_angle.abs(),
    })
}
