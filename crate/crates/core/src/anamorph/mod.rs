//! Anamorph maps: the three ways of placing a picture so that it looks
//! right in a cylindrical mirror, and their rasterization.
//!
//! Source coordinates `(u, v)` are meters on the picture: `u` runs to the
//! viewer's right (centred), `v` runs up from the bottom edge. Table
//! coordinates are the scene frame, with the viewer on `+x`.

mod render;
mod sheet;
mod surface;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cylinder::Scene;
use crate::error::OpticsError;
use crate::geometry::Vec3;

pub use render::{render, RenderOutcome, RenderSpec};
pub use sheet::{sheet_layout, SheetLayout, SheetSize, SCALE_BAR_LENGTH, SHEET_MARGIN};
pub use surface::ArcLengthTable;

/// Boundary samples per edge when checking that a picture fits.
const FIT_SAMPLES: usize = 48;

/// How the picture is placed relative to the mirror.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnamorphKind {
    /// Wrapped on the cylinder surface.
    Erect,
    /// Wrapped on the tangential virtual surface inside the cylinder.
    #[serde(rename = "3d")]
    ThreeD,
    /// Lying flat on the table behind the cylinder.
    Flat,
}

impl AnamorphKind {
    pub const ALL: [AnamorphKind; 3] = [
        AnamorphKind::Erect,
        AnamorphKind::ThreeD,
        AnamorphKind::Flat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnamorphKind::Erect => "erect",
            AnamorphKind::ThreeD => "3d",
            AnamorphKind::Flat => "flat",
        }
    }
}

impl fmt::Display for AnamorphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnamorphKind {
    type Err = OpticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "erect" => Ok(AnamorphKind::Erect),
            "3d" | "threed" => Ok(AnamorphKind::ThreeD),
            "flat" => Ok(AnamorphKind::Flat),
            _ => Err(OpticsError::InvalidInput(format!(
                "unknown anamorph kind '{s}', expected erect, 3d or flat"
            ))),
        }
    }
}

/// Invertible correspondence between picture coordinates and table points.
#[derive(Clone, Debug)]
pub struct AnamorphMap {
    pub kind: AnamorphKind,
    pub scene: Scene,
    /// Physical picture width, meters.
    pub width: f64,
    /// Physical picture height, meters.
    pub height: f64,
    /// `x` of the picture's bottom edge for [`AnamorphKind::Flat`].
    pub flat_near_edge: f64,
    surface: Option<ArcLengthTable>,
}

/// Builds the map for a picture of `width × height` meters.
///
/// Fails with [`OpticsError::RegionOverflow`] when some part of the picture
/// has no visible, unoccluded table point; the error carries the largest
/// width that fits at the requested height and the largest height that fits
/// at the requested width.
pub fn build_map(
    kind: AnamorphKind,
    scene: Scene,
    width: f64,
    height: f64,
) -> Result<AnamorphMap, OpticsError> {
    if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
        return Err(OpticsError::InvalidInput(format!(
            "picture size must be positive, got {width} x {height} m"
        )));
    }
    let surface = match kind {
        AnamorphKind::ThreeD => {
            let z_max = scene.cylinder_height.min(0.999 * scene.eye.z);
            Some(ArcLengthTable::build(&scene, z_max)?)
        }
        _ => None,
    };
    let map = AnamorphMap {
        kind,
        scene,
        width,
        height,
        flat_near_edge: 0.0,
        surface,
    };
    if !map.fits(width, height) {
        let max_w = largest_fitting(width, |w| map.fits(w, height));
        let max_h = largest_fitting(height, |h| map.fits(width, h));
        return Err(OpticsError::RegionOverflow {
            requested_w: width,
            requested_h: height,
            max_w,
            max_h,
        });
    }
    Ok(map)
}

/// Largest `x ≤ upper` with `fits(x)`, assuming feasibility shrinks with `x`.
fn largest_fitting(upper: f64, fits: impl Fn(f64) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0, upper);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

impl AnamorphMap {
    /// Whether `(u, v)` lies on the picture.
    pub fn contains(&self, u: f64, v: f64) -> bool {
        u.abs() <= 0.5 * self.width && (0.0..=self.height).contains(&v)
    }

    /// Table point where picture point `(u, v)` must be drawn.
    pub fn forward(&self, u: f64, v: f64) -> Result<Vec3, OpticsError> {
        let scene = &self.scene;
        match self.kind {
            AnamorphKind::Erect => {
                let azimuth = u / scene.radius;
                if azimuth.abs() >= scene.visible_half_angle() {
                    return Err(OpticsError::NoSolution);
                }
                scene.trace_to_table(scene.surface_point(azimuth, v))
            }
            AnamorphKind::ThreeD => {
                let table = self.surface.as_ref().ok_or(OpticsError::NoSolution)?;
                let (azimuth, z) = table.invert(u, v).ok_or(OpticsError::NoSolution)?;
                scene.trace_to_table(scene.surface_point(azimuth, z))
            }
            AnamorphKind::Flat => {
                let s = self.flat_source_point(u, v);
                let p = self.flat_mirror_point(s)?;
                let n = Scene::normal(p.y.atan2(p.x));
                let mut t = s - n * (2.0 * (s - p).dot(n));
                t.z = 0.0;
                Ok(t)
            }
        }
    }

    /// Picture point drawn at table point `t`. The result may fall outside
    /// the picture; check with [`contains`](Self::contains).
    pub fn inverse(&self, t: Vec3) -> Result<(f64, f64), OpticsError> {
        let scene = &self.scene;
        if scene.occludes(t) {
            return Err(OpticsError::NoSolution);
        }
        let p = scene.solve_reflection_point(t)?;
        let azimuth = p.y.atan2(p.x);
        match self.kind {
            AnamorphKind::Erect => Ok((scene.radius * azimuth, p.z)),
            AnamorphKind::ThreeD => {
                let table = self.surface.as_ref().ok_or(OpticsError::NoSolution)?;
                table.coords(azimuth, p.z).ok_or(OpticsError::NoSolution)
            }
            AnamorphKind::Flat => {
                let n = Scene::normal(azimuth);
                let s = t - n * (2.0 * (t - p).dot(n));
                Ok((s.y, self.flat_near_edge - s.x))
            }
        }
    }

    /// Table position of picture point `(u, v)` for the flat kind.
    pub fn flat_source_point(&self, u: f64, v: f64) -> Vec3 {
        Vec3::new(self.flat_near_edge - v, u, 0.0)
    }

    /// Where the eye's line towards table point `s` meets the mirror.
    fn flat_mirror_point(&self, s: Vec3) -> Result<Vec3, OpticsError> {
        let scene = &self.scene;
        let e = scene.eye;
        let d = s - e;
        let a = d.x * d.x + d.y * d.y;
        let b = e.x * d.x + e.y * d.y;
        let c = e.x * e.x + e.y * e.y - scene.radius * scene.radius;
        let disc = b * b - a * c;
        if a == 0.0 || disc <= 0.0 {
            return Err(OpticsError::NoSolution);
        }
        let k = (-b - disc.sqrt()) / a;
        if !(0.0..=1.0).contains(&k) {
            return Err(OpticsError::NoSolution);
        }
        let p = e + d * k;
        if p.z < 0.0 || p.z > scene.cylinder_height {
            return Err(OpticsError::NoSolution);
        }
        Ok(scene.surface_point(p.y.atan2(p.x), p.z))
    }

    /// Whether a centred picture of `width × height` maps entirely onto
    /// visible table points.
    fn fits(&self, width: f64, height: f64) -> bool {
        // The bottom edge of the wrapped kinds touches the tube itself.
        let v0 = 1e-4 * height;
        let n = FIT_SAMPLES;
        let mut points = Vec::with_capacity(4 * n + 81);
        for k in 0..=n {
            let f = k as f64 / n as f64;
            let u = width * (f - 0.5);
            let v = v0 + (height - v0) * f;
            points.extend([(u, v0), (u, height), (-0.5 * width, v), (0.5 * width, v)]);
        }
        for i in 0..9 {
            for j in 0..9 {
                points.push((
                    width * (i as f64 / 8.0 - 0.5),
                    v0 + (height - v0) * j as f64 / 8.0,
                ));
            }
        }
        points.iter().all(|&(u, v)| match self.forward(u, v) {
            Ok(t) => {
                t.is_finite()
                    && t.horizontal().norm() > self.scene.radius
                    && !self.scene.occludes(t)
            }
            Err(_) => false,
        })
    }

    /// Table bounding box `(x_min, x_max, y_min, y_max)` of the picture's
    /// outline, including the tube's footprint.
    pub fn table_bounds(&self) -> (f64, f64, f64, f64) {
        let r = self.scene.radius;
        let mut b = (-r, r, -r, r);
        let n = 4 * FIT_SAMPLES;
        let v0 = 1e-4 * self.height;
        for k in 0..=n {
            let f = k as f64 / n as f64;
            let u = self.width * (f - 0.5);
            let v = v0 + (self.height - v0) * f;
            for (u, v) in [
                (u, v0),
                (u, self.height),
                (-0.5 * self.width, v),
                (0.5 * self.width, v),
            ] {
                if let Ok(t) = self.forward(u, v) {
                    b = (b.0.min(t.x), b.1.max(t.x), b.2.min(t.y), b.3.max(t.y));
                }
            }
        }
        b
    }
}
