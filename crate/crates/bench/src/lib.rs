//! Fixtures shared by the benchmarks.

use catoptrics_core::raster::RasterImage;

/// A smooth 4 cm x 8 cm test card at 254 dpi.
pub fn test_card() -> RasterImage {
    RasterImage::from_fn(400, 800, 254.0, |x, y| {
        let r = (x * 255 / 399) as u8;
        let g = (y * 255 / 799) as u8;
        [r, g, 255 - r / 2 - g / 2]
    })
}

/// `n` evenly spaced values over `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1).max(1) as f64)
        .collect()
}
