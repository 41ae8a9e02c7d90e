//! Arc-length coordinates on the tangential virtual surface.

use rayon::prelude::*;

use crate::cylinder::Scene;
use crate::error::OpticsError;
use crate::geometry::Vec3;
use crate::roots::bisect;

const AZIMUTH_NODES: usize = 721;
const HEIGHT_NODES: usize = 601;

/// Tabulated `(azimuth, z) -> (u, v)` where `u` is the signed arc length of
/// the surface's horizontal section measured from the front generator and
/// `v` the arc length of its vertical section measured from the table.
#[derive(Clone, Debug)]
pub struct ArcLengthTable {
    azimuth_max: f64,
    z_max: f64,
    /// `[j * AZIMUTH_NODES + i]`, j = height index
    u: Vec<f64>,
    v: Vec<f64>,
}

impl ArcLengthTable {
    pub fn build(scene: &Scene, z_max: f64) -> Result<Self, OpticsError> {
        let azimuth_max = 0.995 * scene.visible_half_angle();
        let na = AZIMUTH_NODES;
        let nz = HEIGHT_NODES;
        let azimuth = |i: usize| -azimuth_max + 2.0 * azimuth_max * i as f64 / (na - 1) as f64;
        let height = |j: usize| z_max * j as f64 / (nz - 1) as f64;

        let points: Vec<Vec3> = (0..nz * na)
            .into_par_iter()
            .map(|k| {
                let (j, i) = (k / na, k % na);
                scene.h_surface_point(azimuth(i), height(j))
            })
            .collect::<Result<_, _>>()?;

        let center = na / 2;
        let mut u = vec![0.0; na * nz];
        let mut v = vec![0.0; na * nz];
        for j in 0..nz {
            let row = j * na;
            for i in center + 1..na {
                u[row + i] = u[row + i - 1] + points[row + i].distance(points[row + i - 1]);
            }
            for i in (0..center).rev() {
                u[row + i] = u[row + i + 1] - points[row + i].distance(points[row + i + 1]);
            }
        }
        for j in 1..nz {
            for i in 0..na {
                let k = j * na + i;
                v[k] = v[k - na] + points[k].distance(points[k - na]);
            }
        }
        Ok(ArcLengthTable {
            azimuth_max,
            z_max,
            u,
            v,
        })
    }

    pub fn azimuth_max(&self) -> f64 {
        self.azimuth_max
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    /// Bilinear lookup; `None` outside the tabulated region.
    pub fn coords(&self, azimuth: f64, z: f64) -> Option<(f64, f64)> {
        if azimuth.abs() > self.azimuth_max || !(0.0..=self.z_max).contains(&z) {
            return None;
        }
        let na = AZIMUTH_NODES;
        let nz = HEIGHT_NODES;
        let fi = (azimuth + self.azimuth_max) / (2.0 * self.azimuth_max) * (na - 1) as f64;
        let fj = z / self.z_max * (nz - 1) as f64;
        let i0 = (fi.floor() as usize).min(na - 2);
        let j0 = (fj.floor() as usize).min(nz - 2);
        let (ai, aj) = (fi - i0 as f64, fj - j0 as f64);
        let lerp = |t: &[f64]| {
            let k = j0 * na + i0;
            let top = t[k] + (t[k + 1] - t[k]) * ai;
            let bottom = t[k + na] + (t[k + na + 1] - t[k + na]) * ai;
            top + (bottom - top) * aj
        };
        Some((lerp(&self.u), lerp(&self.v)))
    }

    /// Inverse of [`coords`](Self::coords) by alternating 1D bisections;
    /// `u` is monotone in azimuth and `v` in height.
    pub fn invert(&self, u: f64, v: f64) -> Option<(f64, f64)> {
        let tol = 1e-13;
        let (mut az, mut z) = (0.0, v.clamp(0.0, self.z_max));
        for _ in 0..60 {
            let z_new = bisect(
                |z| self.coords(az, z).map_or(f64::NAN, |c| c.1 - v),
                0.0,
                self.z_max,
                tol,
            )?;
            let az_new = bisect(
                |a| self.coords(a, z_new).map_or(f64::NAN, |c| c.0 - u),
                -self.azimuth_max,
                self.azimuth_max,
                tol,
            )?;
            let done = (az_new - az).abs() < 1e-13 && (z_new - z).abs() < 1e-13;
            az = az_new;
            z = z_new;
            if done {
                break;
            }
        }
        Some((az, z))
    }
}
