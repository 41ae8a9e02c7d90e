use rayon::prelude::*;

use super::{CausticSample, CausticSheet, FocalLabel, PlanarRayFamily};
use crate::geometry::Vec3;

/// Relative finite-difference step, as a fraction of the domain span.
const FD_STEP: f64 = 1e-6;

fn cross_z(a: Vec3, b: Vec3) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Envelope of a planar ray family sampled at `params`.
///
/// At each parameter the point `o + s d` is found where the ray meets its
/// infinitesimal neighbour, i.e. where `(o' + s d') × d = 0`. Derivatives are
/// central differences. Parameters whose neighbours are parallel (or whose
/// rays cannot be built) come back with `point: None`.
///
/// Cusps are the samples where the envelope reverses its direction of travel
/// along the rays.
pub fn envelope_2d<F: PlanarRayFamily>(family: &F, params: &[f64]) -> CausticSheet {
    let (lo, hi) = family.domain();
    let h = FD_STEP * (hi - lo);

    let mut samples: Vec<CausticSample> = params
        .par_iter()
        .map(|&t| {
            let none = CausticSample {
                param: t,
                point: None,
                ray_distance: f64::NAN,
                cusp: false,
            };
            let (Ok(r), Ok(rp), Ok(rm)) = (family.ray(t), family.ray(t + h), family.ray(t - h))
            else {
                return none;
            };
            let d_origin = (rp.origin - rm.origin) / (2.0 * h);
            let d_dir = (rp.direction - rm.direction) / (2.0 * h);
            let denom = cross_z(d_dir, r.direction);
            // Direction not turning (or turning within the ray's own line).
            if denom == 0.0 || denom.abs() <= 1e-9 * d_dir.norm() {
                return none;
            }
            let s = -cross_z(d_origin, r.direction) / denom;
            let p = r.at(s);
            if !p.is_finite() {
                return none;
            }
            CausticSample {
                param: t,
                point: Some(p),
                ray_distance: s,
                cusp: false,
            }
        })
        .collect();

    // Speed of the envelope point along its own ray; changes sign at cusps.
    let n = samples.len();
    let mut speed = vec![None; n];
    for k in 1..n.saturating_sub(1) {
        if let (Some(a), Some(b), Some(_)) =
            (samples[k - 1].point, samples[k + 1].point, samples[k].point)
        {
            if let Ok(r) = family.ray(samples[k].param) {
                speed[k] = Some((b - a).dot(r.direction));
            }
        }
    }
    for k in 1..n.saturating_sub(1) {
        if let (Some(a), Some(b)) = (speed[k], speed[k + 1]) {
            if a == 0.0 {
                samples[k].cusp = true;
            } else if a.signum() != b.signum() && b != 0.0 {
                let idx = if a.abs() <= b.abs() { k } else { k + 1 };
                samples[idx].cusp = true;
            }
        }
    }

    CausticSheet {
        label: FocalLabel::H,
        samples,
    }
}
