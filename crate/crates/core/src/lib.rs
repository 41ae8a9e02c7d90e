//! Geometric optics of cylindrical-mirror anamorphs and flat water surfaces.
//!
//! The crate covers four pieces that share one table-frame vocabulary:
//!
//! * [`geometry`]: vectors, rays, reflection, refraction and intersections.
//! * [`cylinder`]: lines of sight reflected in a vertical tube and the two
//!   astigmatic virtual images (H and V) behind it.
//! * [`caustics`]: envelopes of planar ray families, the focal-point scan
//!   along a chief ray, the rainbow deviation and the blur-spot simulation.
//! * [`anamorph`]: erect, 3D and flat anamorph maps and their rasterization
//!   into printable sheets.
//! * [`water`]: apparent positions of submerged points, the pool floor, the
//!   ruler and the archer fish.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anamorph;
pub mod caustics;
pub mod cylinder;
pub mod error;
pub mod geometry;
pub mod raster;
pub mod roots;
pub mod units;
pub mod water;

pub use cylinder::{ImagePair, Scene, SightLine};
pub use error::OpticsError;
pub use geometry::{Interface, Ray, Vec3};
