//! RGB rasters with a physical resolution.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::OpticsError;

pub const METERS_PER_INCH: f64 = 0.0254;

/// 8-bit RGB image with its print resolution in dots per inch.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterImage {
    pub width: u32,
    pub height: u32,
    pub dpi: f64,
    /// Row-major RGB triples.
    pub data: Vec<u8>,
}

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];

impl RasterImage {
    pub fn new(width: u32, height: u32, dpi: f64, fill: Rgb) -> Self {
        assert!(dpi > 0.0, "dpi must be positive");
        let n = width as usize * height as usize;
        let mut data = Vec::with_capacity(3 * n);
        for _ in 0..n {
            data.extend_from_slice(&fill);
        }
        RasterImage {
            width,
            height,
            dpi,
            data,
        }
    }

    pub fn from_fn<F: FnMut(u32, u32) -> Rgb>(width: u32, height: u32, dpi: f64, mut f: F) -> Self {
        let mut img = RasterImage::new(width, height, dpi, WHITE);
        for y in 0..height {
            for x in 0..width {
                img.put(x, y, f(x, y));
            }
        }
        img
    }

    /// Meters per pixel.
    pub fn pixel_size(&self) -> f64 {
        METERS_PER_INCH / self.dpi
    }

    /// Printed width and height in meters.
    pub fn physical_size(&self) -> (f64, f64) {
        (
            self.width as f64 * self.pixel_size(),
            self.height as f64 * self.pixel_size(),
        )
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> Rgb {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn put(&mut self, x: u32, y: u32, c: Rgb) {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        self.data[i..i + 3].copy_from_slice(&c);
    }

    /// Bilinear sample at continuous pixel coordinates, where pixel `(i, j)`
    /// has its center at `(i + 0.5, j + 0.5)`. Coordinates are clamped to the
    /// image.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> [f64; 3] {
        let fx = (x - 0.5).clamp(0.0, (self.width - 1) as f64);
        let fy = (y - 0.5).clamp(0.0, (self.height - 1) as f64);
        let x0 = fx.floor() as u32;
        let y0 = fy.floor() as u32;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let (ax, ay) = (fx - x0 as f64, fy - y0 as f64);
        let (p00, p10, p01, p11) = (
            self.get(x0, y0),
            self.get(x1, y0),
            self.get(x0, y1),
            self.get(x1, y1),
        );
        let mut out = [0.0; 3];
        for c in 0..3 {
            let top = p00[c] as f64 + (p10[c] as f64 - p00[c] as f64) * ax;
            let bottom = p01[c] as f64 + (p11[c] as f64 - p01[c] as f64) * ax;
            out[c] = top + (bottom - top) * ay;
        }
        out
    }

    /// Copies `other` with its top-left corner at `(x, y)`; parts falling
    /// outside are dropped.
    pub fn blit(&mut self, other: &RasterImage, x: u32, y: u32) {
        for j in 0..other.height {
            let ty = y + j;
            if ty >= self.height {
                break;
            }
            for i in 0..other.width {
                let tx = x + i;
                if tx >= self.width {
                    break;
                }
                self.put(tx, ty, other.get(i, j));
            }
        }
    }

    pub fn fill_rect(&mut self, x0: u32, y0: u32, w: u32, h: u32, c: Rgb) {
        for y in y0..(y0 + h).min(self.height) {
            for x in x0..(x0 + w).min(self.width) {
                self.put(x, y, c);
            }
        }
    }

    /// Loads any format the `image` crate reads, at the given resolution.
    pub fn load(path: &Path, dpi: f64) -> Result<Self, OpticsError> {
        let img = image::open(path)
            .map_err(|e| OpticsError::InvalidInput(format!("{}: {e}", path.display())))?
            .to_rgb8();
        Ok(RasterImage {
            width: img.width(),
            height: img.height(),
            dpi,
            data: img.into_raw(),
        })
    }

    /// PNG bytes with a pHYs chunk so the sheet prints at its true size.
    pub fn encode_png(&self) -> Result<Vec<u8>, OpticsError> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let ppm = (self.dpi / METERS_PER_INCH).round() as u32;
            enc.set_pixel_dims(Some(png::PixelDimensions {
                xppu: ppm,
                yppu: ppm,
                unit: png::Unit::Meter,
            }));
            let mut w = enc.write_header().map_err(io_err)?;
            w.write_image_data(&self.data).map_err(io_err)?;
            w.finish().map_err(io_err)?;
        }
        Ok(out)
    }

    /// Binary PPM (P6) bytes. PPM carries no resolution.
    pub fn encode_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    pub fn write_png(&self, path: &Path) -> Result<(), OpticsError> {
        write_file(path, &self.encode_png()?)
    }

    pub fn write_ppm(&self, path: &Path) -> Result<(), OpticsError> {
        write_file(path, &self.encode_ppm())
    }
}

fn io_err<E: std::fmt::Display>(e: E) -> OpticsError {
    OpticsError::InvalidInput(format!("encoding failed: {e}"))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), OpticsError> {
    let file = File::create(path)
        .map_err(|e| OpticsError::InvalidInput(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| OpticsError::InvalidInput(format!("{}: {e}", path.display())))
}

/// Reads the pixels-per-meter value of a PNG's pHYs chunk.
pub fn png_pixels_per_meter(bytes: &[u8]) -> Option<u32> {
    let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    let reader = decoder.read_info().ok()?;
    let dims = reader.info().pixel_dims?;
    matches!(dims.unit, png::Unit::Meter).then_some(dims.xppu)
}
