//! Caustics: envelopes, focal points along chief rays, the rainbow and the
//! astigmatic blur spot.

mod blur;
mod envelope;
pub mod families;
mod focal;
mod rainbow;

use serde::Serialize;

use crate::error::OpticsError;
use crate::geometry::{Ray, Vec3};

pub use blur::{blur_spot, focus_distances, BlurSpot, Elongation, SCREEN_DISTANCE};
pub use envelope::envelope_2d;
pub use focal::{focal_points_on_chief_ray, FocalPoints, SCAN_SAMPLES};
pub use rainbow::{deviation_histogram, rainbow_deviation, rainbow_minimum, RainbowMinimum};

/// One-parameter family of rays lying in a plane `z = const`.
pub trait PlanarRayFamily: Sync {
    fn ray(&self, t: f64) -> Result<Ray, OpticsError>;

    /// Parameter interval on which the family is defined.
    fn domain(&self) -> (f64, f64);
}

/// Two-parameter family of rays around a chief ray.
pub trait RayFamily: Sync {
    fn ray(&self, params: [f64; 2]) -> Result<Ray, OpticsError>;

    /// Characteristic size of each parameter; finite-difference steps are a
    /// fixed fraction of it.
    fn param_scale(&self) -> [f64; 2] {
        [1.0, 1.0]
    }
}

/// Which astigmatic image a caustic belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FocalLabel {
    /// Tangential image, focus of the horizontal fan.
    H,
    /// Sagittal image, focus of the vertical fan.
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CausticSample {
    pub param: f64,
    /// `None` where neighbouring rays are parallel.
    pub point: Option<Vec3>,
    /// Signed distance along the ray from its origin to the envelope point.
    pub ray_distance: f64,
    pub cusp: bool,
}

/// Sampled envelope of a ray family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CausticSheet {
    pub label: FocalLabel,
    pub samples: Vec<CausticSample>,
}

impl CausticSheet {
    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.samples.iter().filter_map(|s| s.point)
    }

    pub fn cusps(&self) -> impl Iterator<Item = &CausticSample> + '_ {
        self.samples.iter().filter(|s| s.cusp)
    }

    pub fn degenerate_count(&self) -> usize {
        self.samples.iter().filter(|s| s.point.is_none()).count()
    }
}
