use serde::Serialize;

use super::{FocalLabel, RayFamily};
use crate::error::OpticsError;
use crate::geometry::{transverse_basis, Ray, Vec3};
use crate::roots::{bisect, golden_section_min};

/// Samples of the scan over the chief ray.
pub const SCAN_SAMPLES: usize = 10_000;
/// Finite-difference step as a fraction of the parameter scale.
const FD_STEP: f64 = 1e-6;
/// Bisection tolerance on the focal distance, meters.
const FOCUS_TOL: f64 = 1e-10;

/// Focal distances along a chief ray, measured from the chief ray's origin
/// (negative values are virtual images behind it).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FocalPoints {
    pub t_h: f64,
    pub t_v: f64,
    /// Where the spot is round; carries no H/V label.
    pub least_confusion: f64,
}

impl FocalPoints {
    pub fn get(&self, label: FocalLabel) -> f64 {
        match label {
            FocalLabel::H => self.t_h,
            FocalLabel::V => self.t_v,
        }
    }
}

/// Transverse-offset Jacobian of a ray family about its chief ray.
struct OffsetJacobian {
    chief: Ray,
    e1: Vec3,
    e2: Vec3,
    /// Neighbour rays: (+p1, -p1, +p2, -p2)
    neighbours: [Ray; 4],
    steps: [f64; 2],
}

impl OffsetJacobian {
    fn new<F: RayFamily + ?Sized>(family: &F, center: [f64; 2]) -> Result<Self, OpticsError> {
        let chief = family.ray(center)?;
        let (e1, e2) = transverse_basis(chief.direction);
        let scale = family.param_scale();
        let steps = [FD_STEP * scale[0], FD_STEP * scale[1]];
        let at = |i: usize, sign: f64| {
            let mut p = center;
            p[i] += sign * steps[i];
            family.ray(p)
        };
        Ok(OffsetJacobian {
            chief,
            e1,
            e2,
            neighbours: [at(0, 1.0)?, at(0, -1.0)?, at(1, 1.0)?, at(1, -1.0)?],
            steps,
        })
    }

    /// Transverse offset of `r` from the chief ray in the plane through
    /// `chief.at(t)` perpendicular to the chief ray.
    fn offset(&self, r: &Ray, t: f64) -> [f64; 2] {
        let c = self.chief.at(t);
        let d0 = self.chief.direction;
        let s = (c - r.origin).dot(d0) / r.direction.dot(d0);
        let q = r.origin + r.direction * s - c;
        [q.dot(self.e1), q.dot(self.e2)]
    }

    /// Columns are the derivatives with respect to each parameter.
    fn matrix(&self, t: f64) -> [[f64; 2]; 2] {
        let mut cols = [[0.0; 2]; 2];
        for (i, col) in cols.iter_mut().enumerate() {
            let plus = self.offset(&self.neighbours[2 * i], t);
            let minus = self.offset(&self.neighbours[2 * i + 1], t);
            let h2 = 2.0 * self.steps[i];
            *col = [(plus[0] - minus[0]) / h2, (plus[1] - minus[1]) / h2];
        }
        cols
    }

    fn det(&self, t: f64) -> f64 {
        let [c0, c1] = self.matrix(t);
        c0[0] * c1[1] - c0[1] * c1[0]
    }

    /// Singular values of the Jacobian, largest first.
    fn singular_values(&self, t: f64) -> (f64, f64) {
        let [c0, c1] = self.matrix(t);
        let a = c0[0] * c0[0] + c0[1] * c0[1];
        let d = c1[0] * c1[0] + c1[1] * c1[1];
        let b = c0[0] * c1[0] + c0[1] * c1[1];
        let tr = a + d;
        let disc = ((a - d) * (a - d) + 4.0 * b * b).sqrt();
        (
            ((tr + disc) / 2.0).max(0.0).sqrt(),
            ((tr - disc) / 2.0).max(0.0).sqrt(),
        )
    }

    /// Direction (in 3D) of the surviving blur line at a rank-one point.
    fn blur_direction(&self, t: f64) -> Option<Vec3> {
        let [c0, c1] = self.matrix(t);
        let col = if c0[0].hypot(c0[1]) >= c1[0].hypot(c1[1]) {
            c0
        } else {
            c1
        };
        let len = col[0].hypot(col[1]);
        (len > 0.0).then(|| (self.e1 * col[0] + self.e2 * col[1]) / len)
    }
}

/// Locates the two astigmatic focal points along a family's chief ray.
///
/// The determinant of the transverse-offset Jacobian is scanned over
/// `t ∈ [-scan_half_range, scan_half_range]` with [`SCAN_SAMPLES`] samples;
/// every sign change is bisected to 1e-10 m. Touching zeros (coincident foci,
/// as for a flat mirror) are caught as near-zero local minima of `|det|` and
/// refined by golden-section search.
///
/// `h_fan_axis` is the transverse direction along which the H fan spreads.
/// At the H focus that fan collapses, so the remaining blur line is
/// perpendicular to it.
pub fn focal_points_on_chief_ray<F: RayFamily + ?Sized>(
    family: &F,
    center: [f64; 2],
    h_fan_axis: Vec3,
    scan_half_range: f64,
) -> Result<FocalPoints, OpticsError> {
    let jac = OffsetJacobian::new(family, center)?;
    let n = SCAN_SAMPLES;
    let step = 2.0 * scan_half_range / (n - 1) as f64;
    let ts: Vec<f64> = (0..n).map(|k| -scan_half_range + step * k as f64).collect();
    let dets: Vec<f64> = ts.iter().map(|&t| jac.det(t)).collect();
    let det_scale = dets.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if det_scale == 0.0 || !det_scale.is_finite() {
        return Err(OpticsError::NoDegeneracy);
    }

    let mut roots: Vec<f64> = Vec::new();
    for k in 0..n - 1 {
        let (d0, d1) = (dets[k], dets[k + 1]);
        if d0 == 0.0 {
            roots.push(ts[k]);
        } else if d0.signum() != d1.signum() && d1 != 0.0 {
            if let Some(t) = bisect(|t| jac.det(t), ts[k], ts[k + 1], FOCUS_TOL) {
                roots.push(t);
            }
        }
    }
    if roots.len() < 2 {
        // Double roots: |det| touches zero without crossing.
        for k in 1..n - 1 {
            let (a, b, c) = (dets[k - 1].abs(), dets[k].abs(), dets[k + 1].abs());
            if b <= a && b <= c && b < 1e-6 * det_scale {
                // Two close roots inside one scan step.
                let fine = refine_pair(&jac, ts[k - 1], ts[k + 1], n);
                if fine.len() == 2 {
                    roots.extend(fine);
                    continue;
                }
                let (t, v) =
                    golden_section_min(|t| jac.det(t).abs(), ts[k - 1], ts[k + 1], FOCUS_TOL);
                if v <= 1e-12 * det_scale && !roots.iter().any(|r| (r - t).abs() < 2.0 * step) {
                    roots.push(t);
                    roots.push(t);
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);

    let h_axis =
        (h_fan_axis - jac.chief.direction * h_fan_axis.dot(jac.chief.direction)).normalized();
    // How much of the surviving blur lies across the H fan (1 at an H focus).
    let across_h = |t: f64| -> f64 {
        match jac.blur_direction(t) {
            Some(b) => 1.0 - b.dot(h_axis).powi(2),
            None => 0.5,
        }
    };

    let (t_h, t_v) = match roots.len() {
        0 | 1 => return Err(OpticsError::NoDegeneracy),
        2 => {
            let (a, b) = (roots[0], roots[1]);
            if across_h(a) >= across_h(b) {
                (a, b)
            } else {
                (b, a)
            }
        }
        _ => {
            // Keep the roots nearest the chief-ray origin, one per label.
            let mut by_dist = roots.clone();
            by_dist.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
            let h = by_dist
                .iter()
                .copied()
                .find(|&t| across_h(t) >= 0.5)
                .ok_or(OpticsError::NoDegeneracy)?;
            let v = by_dist
                .iter()
                .copied()
                .find(|&t| t != h && across_h(t) <= 0.5)
                .ok_or(OpticsError::NoDegeneracy)?;
            (h, v)
        }
    };

    let (lo, hi) = if t_h <= t_v { (t_h, t_v) } else { (t_v, t_h) };
    let least_confusion = if hi - lo < FOCUS_TOL {
        lo
    } else {
        let aspect = |t: f64| {
            let (s1, s2) = jac.singular_values(t);
            s1 - s2
        };
        golden_section_min(aspect, lo, hi, FOCUS_TOL).0
    };

    Ok(FocalPoints {
        t_h,
        t_v,
        least_confusion,
    })
}

/// Sign changes of the determinant on `[a, b]` sampled `n` times, refined
/// by bisection. Recurses once more when the minimum is still unresolved.
fn refine_pair(jac: &OffsetJacobian, a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut lo = a;
    let mut hi = b;
    for _ in 0..3 {
        let step = (hi - lo) / (n - 1) as f64;
        let dets: Vec<f64> = (0..n).map(|k| jac.det(lo + step * k as f64)).collect();
        let mut found = Vec::new();
        for k in 0..n - 1 {
            if dets[k] != 0.0 && dets[k + 1] != 0.0 && dets[k].signum() != dets[k + 1].signum() {
                let t0 = lo + step * k as f64;
                if let Some(t) = bisect(|t| jac.det(t), t0, t0 + step, FOCUS_TOL) {
                    found.push(t);
                }
            }
        }
        if found.len() >= 2 || step < FOCUS_TOL {
            found.truncate(2);
            return found;
        }
        let k = (0..n)
            .min_by(|&i, &j| dets[i].abs().total_cmp(&dets[j].abs()))
            .unwrap_or(0);
        let c = lo + step * k as f64;
        lo = c - step;
        hi = c + step;
    }
    Vec::new()
}
