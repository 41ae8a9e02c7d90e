use serde::Serialize;

use crate::cylinder::{solve_reflection, Scene};
use crate::error::OpticsError;
use crate::geometry::{transverse_basis, Vec3};

/// Lens-to-screen distance of the ideal thin-lens camera, meters.
pub const SCREEN_DISTANCE: f64 = 0.017;
/// Aperture samples per diameter.
const APERTURE_GRID: usize = 21;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Elongation {
    Vertical,
    Horizontal,
}

/// Spot of a point source on the camera screen.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlurSpot {
    /// Screen coordinates (horizontal, vertical), meters.
    pub points: Vec<[f64; 2]>,
    pub sigma_major: f64,
    pub sigma_minor: f64,
    /// Standard deviations along the screen's horizontal and vertical axes.
    pub sigma_horizontal: f64,
    pub sigma_vertical: f64,
    pub orientation: Elongation,
}

impl BlurSpot {
    /// `σ_vertical / σ_horizontal`; above 1 the spot is taller than wide.
    pub fn aspect(&self) -> f64 {
        self.sigma_vertical / self.sigma_horizontal
    }
}

/// Distances from the eye to the H and V images seen at mirror point `p`.
pub fn focus_distances(scene: &Scene, p: Vec3, source: Vec3) -> Result<(f64, f64), OpticsError> {
    let pair = scene.image_pair(p, source)?;
    let base = scene.eye.distance(p);
    Ok((base + pair.h_distance, base + pair.v_distance))
}

/// Simulates a camera at the eye looking at mirror point `p`, with an ideal
/// thin lens of the given aperture focused at `focus_distance`, imaging
/// `source` via the tube.
///
/// Every aperture sample gets its own reflection path (solved exactly); the
/// ray is extended back to the object plane at `focus_distance` and mapped to
/// the screen by the lens magnification.
pub fn blur_spot(
    scene: &Scene,
    aperture_diameter: f64,
    focus_distance: f64,
    source: Vec3,
    p: Vec3,
) -> Result<BlurSpot, OpticsError> {
    if !(focus_distance > 0.0) || !(aperture_diameter >= 0.0) {
        return Err(OpticsError::InvalidInput(
            "focus distance must be positive and aperture non-negative".into(),
        ));
    }
    let axis = (p - scene.eye).normalized();
    let (e_h, e_v) = transverse_basis(axis);
    let magnification = SCREEN_DISTANCE / focus_distance;
    let radius = 0.5 * aperture_diameter;

    let mut points = Vec::new();
    let mut total = 0usize;
    let mut blocked = 0usize;
    for i in 0..APERTURE_GRID {
        for j in 0..APERTURE_GRID {
            let u = (2.0 * i as f64 / (APERTURE_GRID - 1) as f64 - 1.0) * radius;
            let v = (2.0 * j as f64 / (APERTURE_GRID - 1) as f64 - 1.0) * radius;
            if u * u + v * v > radius * radius * (1.0 + 1e-12) {
                continue;
            }
            total += 1;
            let a = scene.eye + e_h * u + e_v * v;
            let mirror = match solve_reflection(scene.radius, source, a) {
                Ok(m) if m.z >= 0.0 && m.z <= scene.cylinder_height => m,
                _ => {
                    blocked += 1;
                    continue;
                }
            };
            let w = (a - mirror).normalized();
            let along = w.dot(axis);
            if along >= 0.0 {
                blocked += 1;
                continue;
            }
            let lambda = ((a - scene.eye).dot(axis) - focus_distance) / along;
            let q = a - w * lambda - scene.eye;
            points.push([-magnification * q.dot(e_h), -magnification * q.dot(e_v)]);
        }
    }
    if blocked > 0 {
        return Err(OpticsError::ApertureOcclusion {
            fraction: blocked as f64 / total as f64,
        });
    }

    let m = points.len() as f64;
    let (mut mx, mut my) = (0.0, 0.0);
    for q in &points {
        mx += q[0];
        my += q[1];
    }
    mx /= m;
    my /= m;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for q in &points {
        let (dx, dy) = (q[0] - mx, q[1] - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    sxx /= m;
    syy /= m;
    sxy /= m;
    let tr = sxx + syy;
    let disc = ((sxx - syy).powi(2) + 4.0 * sxy * sxy).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = (0.5 * (tr - disc)).max(0.0);
    // Major eigenvector: (sxy, l1 - sxx) or (l1 - syy, sxy).
    let (ex, ey) = if sxy.abs() > 0.0 {
        (sxy, l1 - sxx)
    } else if sxx >= syy {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    let orientation = if ey.abs() > ex.abs() {
        Elongation::Vertical
    } else {
        Elongation::Horizontal
    };
    Ok(BlurSpot {
        points,
        sigma_major: l1.sqrt(),
        sigma_minor: l2.sqrt(),
        sigma_horizontal: sxx.sqrt(),
        sigma_vertical: syy.sqrt(),
        orientation,
    })
}
