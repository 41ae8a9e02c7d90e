//! Inverse-sampled rasterization of an anamorph map.

use rayon::prelude::*;
use serde::Serialize;

use super::AnamorphMap;
use crate::error::OpticsError;
use crate::geometry::Vec3;
use crate::raster::{RasterImage, BLACK, METERS_PER_INCH, WHITE};

/// Output resolution and blank border around the drawing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RenderSpec {
    pub dpi: f64,
    /// Border added on every side of the drawing's bounding box, meters.
    pub margin: f64,
    /// Width of the footprint outline, meters.
    pub outline: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            dpi: 300.0,
            margin: 0.005,
            outline: 0.0005,
        }
    }
}

/// A rendered anamorph and where it sits on the table.
#[derive(Clone, Debug)]
pub struct RenderOutcome {
    pub image: RasterImage,
    /// Table coordinates of the top-left corner of pixel (0, 0). Rows run
    /// along `+x` (towards the viewer), columns along `+y`.
    pub x_min: f64,
    pub y_min: f64,
    /// Tube radius, meters.
    pub radius: f64,
    /// Pixels that received picture content.
    pub covered: usize,
    /// Pixels outside the tube with no visible reflection path.
    pub unreachable: usize,
    pub total: usize,
}

impl RenderOutcome {
    pub fn coverage(&self) -> f64 {
        self.covered as f64 / self.total as f64
    }

    /// Continuous pixel coordinates `(column, row)` of table point `t`.
    pub fn table_to_pixel(&self, t: Vec3) -> (f64, f64) {
        let p = self.image.pixel_size();
        ((t.y - self.y_min) / p, (t.x - self.x_min) / p)
    }

    /// Table point at continuous pixel coordinates `(column, row)`.
    pub fn pixel_to_table(&self, col: f64, row: f64) -> Vec3 {
        let p = self.image.pixel_size();
        Vec3::new(self.x_min + row * p, self.y_min + col * p, 0.0)
    }

    /// Pixel coordinates of the tube axis.
    pub fn axis_pixel(&self) -> (f64, f64) {
        self.table_to_pixel(Vec3::ZERO)
    }
}

#[derive(Clone, Copy)]
enum PixelClass {
    Covered,
    Unreachable,
    Other,
}

/// Rasterizes `src` through `map`.
///
/// Every output pixel centre is pulled back through the inverse map and the
/// picture is sampled bilinearly there; table points outside the picture or
/// without a reflection path stay white. The tube's footprint is outlined
/// just inside its true radius. Rows are processed in parallel, but each
/// pixel is a pure function of its position, so the result does not depend
/// on the thread count.
pub fn render(
    map: &AnamorphMap,
    src: &RasterImage,
    spec: RenderSpec,
) -> Result<RenderOutcome, OpticsError> {
    if !(spec.dpi > 0.0 && spec.dpi.is_finite()) {
        return Err(OpticsError::InvalidInput(format!(
            "dpi must be positive, got {}",
            spec.dpi
        )));
    }
    if src.width == 0 || src.height == 0 {
        return Err(OpticsError::InvalidInput("source image is empty".into()));
    }
    let pixel = METERS_PER_INCH / spec.dpi;
    let (x0, x1, y0, y1) = map.table_bounds();
    // Columns are laid out symmetrically about y = 0 so that symmetric
    // pictures give exactly symmetric renders.
    let half_cols = ((y0.abs().max(y1.abs()) + spec.margin) / pixel).ceil() as u32;
    let cols = 2 * half_cols;
    let y_min = -(half_cols as f64) * pixel;
    let x_min = x0 - spec.margin;
    let rows = ((x1 + spec.margin - x_min) / pixel).ceil() as u32;
    let radius = map.scene.radius;
    let ring_inner = radius - spec.outline.max(1.5 * pixel);

    let mut image = RasterImage::new(cols, rows, spec.dpi, WHITE);
    let row_bytes = 3 * cols as usize;
    let classes: Vec<PixelClass> = image
        .data
        .par_chunks_mut(row_bytes)
        .enumerate()
        .flat_map_iter(|(j, row)| {
            let x = x_min + (j as f64 + 0.5) * pixel;
            let mut out = Vec::with_capacity(cols as usize);
            for i in 0..cols as usize {
                let y = y_min + (i as f64 + 0.5) * pixel;
                let rho = x.hypot(y);
                let (color, class) = if rho <= radius {
                    let c = if rho >= ring_inner { BLACK } else { WHITE };
                    (c, PixelClass::Other)
                } else {
                    shade(map, src, Vec3::new(x, y, 0.0))
                };
                row[3 * i..3 * i + 3].copy_from_slice(&color);
                out.push(class);
            }
            out
        })
        .collect();

    let covered = classes
        .iter()
        .filter(|c| matches!(c, PixelClass::Covered))
        .count();
    let unreachable = classes
        .iter()
        .filter(|c| matches!(c, PixelClass::Unreachable))
        .count();
    Ok(RenderOutcome {
        image,
        x_min,
        y_min,
        radius,
        covered,
        unreachable,
        total: classes.len(),
    })
}

fn shade(map: &AnamorphMap, src: &RasterImage, t: Vec3) -> ([u8; 3], PixelClass) {
    match map.inverse(t) {
        Ok((u, v)) if map.contains(u, v) => {
            let sx = (u / map.width + 0.5) * src.width as f64;
            let sy = (1.0 - v / map.height) * src.height as f64;
            let c = src.sample_bilinear(sx, sy);
            ([to_u8(c[0]), to_u8(c[1]), to_u8(c[2])], PixelClass::Covered)
        }
        Ok(_) => (WHITE, PixelClass::Other),
        Err(_) => (WHITE, PixelClass::Unreachable),
    }
}

fn to_u8(x: f64) -> u8 {
    x.round().clamp(0.0, 255.0) as u8
}
