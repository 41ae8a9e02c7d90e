use std::f64::consts::PI;

use serde::Serialize;

use crate::roots::golden_section_min;

/// Deviation of a ray after entering a drop of index `n` at impact parameter
/// `b`, reflecting once inside and leaving: `π + 2i − 4r`.
pub fn rainbow_deviation(n: f64, b: f64) -> f64 {
    let i = b.asin();
    let r = (b / n).asin();
    PI + 2.0 * i - 4.0 * r
}

/// Minimum-deviation ray of the primary bow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RainbowMinimum {
    pub impact: f64,
    pub deviation: f64,
    /// `π − deviation`: angular radius of the bow around the antisolar point.
    pub rainbow_angle: f64,
}

pub fn rainbow_minimum(n: f64) -> RainbowMinimum {
    let (impact, deviation) =
        golden_section_min(|b| rainbow_deviation(n, b), 0.0, 1.0 - 1e-15, 1e-12);
    RainbowMinimum {
        impact,
        deviation,
        rainbow_angle: PI - deviation,
    }
}

/// Histogram of exit angles `π − deviation` for `samples` impact parameters
/// spread uniformly (midpoint rule) over `[0, 1)`. Bins cover `[0, max_angle)`
/// in equal widths.
pub fn deviation_histogram(n: f64, samples: usize, bins: usize, max_angle: f64) -> Vec<usize> {
    let mut counts = vec![0usize; bins];
    for k in 0..samples {
        let b = (k as f64 + 0.5) / samples as f64;
        let angle = PI - rainbow_deviation(n, b);
        let idx = (angle / max_angle * bins as f64).floor();
        if idx >= 0.0 && (idx as usize) < bins {
            counts[idx as usize] += 1;
        }
    }
    counts
}
