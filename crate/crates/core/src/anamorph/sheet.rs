//! Printable page layout for a rendered anamorph.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::RenderOutcome;
use crate::error::OpticsError;
use crate::raster::{RasterImage, BLACK, METERS_PER_INCH, WHITE};

/// Minimum blank border on every side of the page, meters.
pub const SHEET_MARGIN: f64 = 0.010;
/// Printed length of the scale bar, meters.
pub const SCALE_BAR_LENGTH: f64 = 0.10;
const SCALE_BAR_GAP: f64 = 0.005;
const SCALE_BAR_THICKNESS: f64 = 0.001;
const SCALE_TICK_HEIGHT: f64 = 0.003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SheetSize {
    A4,
    Letter,
}

impl SheetSize {
    /// Portrait width and height in meters.
    pub fn dimensions(self) -> (f64, f64) {
        match self {
            SheetSize::A4 => (0.210, 0.297),
            SheetSize::Letter => (8.5 * METERS_PER_INCH, 11.0 * METERS_PER_INCH),
        }
    }
}

impl fmt::Display for SheetSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SheetSize::A4 => "a4",
            SheetSize::Letter => "letter",
        })
    }
}

impl FromStr for SheetSize {
    type Err = OpticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a4" => Ok(SheetSize::A4),
            "letter" => Ok(SheetSize::Letter),
            _ => Err(OpticsError::InvalidInput(format!(
                "unknown sheet '{s}', expected a4 or letter"
            ))),
        }
    }
}

/// A full page ready to print at `image.dpi`.
#[derive(Clone, Debug)]
pub struct SheetLayout {
    pub image: RasterImage,
    pub sheet: SheetSize,
    /// Top-left pixel of the anamorph on the page.
    pub content_origin: (u32, u32),
    /// Centre of the tube's placement circle on the page, pixels.
    pub circle_center: (f64, f64),
    pub circle_diameter_px: f64,
    /// Left end and length of the scale bar, pixels.
    pub scale_bar_origin: (u32, u32),
    pub scale_bar_px: u32,
}

fn px(meters: f64, dpi: f64) -> f64 {
    meters * dpi / METERS_PER_INCH
}

/// Centres a rendered anamorph on a page with a 10 cm scale bar beneath it.
///
/// The anamorph's pixels are copied unchanged, so the same render laid out
/// on different sheets differs only in the surrounding white space.
pub fn sheet_layout(render: &RenderOutcome, sheet: SheetSize) -> Result<SheetLayout, OpticsError> {
    let content = &render.image;
    let dpi = content.dpi;
    let (sheet_w, sheet_h) = sheet.dimensions();
    let page_w = px(sheet_w, dpi).round() as u32;
    let page_h = px(sheet_h, dpi).round() as u32;
    let margin = px(SHEET_MARGIN, dpi).ceil() as u32;
    let gap = px(SCALE_BAR_GAP, dpi).round() as u32;
    let bar_len = px(SCALE_BAR_LENGTH, dpi).round() as u32;
    let bar_thick = (px(SCALE_BAR_THICKNESS, dpi).round() as u32).max(1);
    let tick_h = (px(SCALE_TICK_HEIGHT, dpi).round() as u32).max(bar_thick);

    let block_w = content.width.max(bar_len);
    let block_h = content.height + gap + tick_h;
    if block_w + 2 * margin > page_w || block_h + 2 * margin > page_h {
        let to_mm = |p: u32| p as f64 * METERS_PER_INCH / dpi * 1000.0;
        return Err(OpticsError::DoesNotFit {
            needed_w: to_mm(block_w + 2 * margin),
            needed_h: to_mm(block_h + 2 * margin),
        });
    }

    let mut page = RasterImage::new(page_w, page_h, dpi, WHITE);
    let top = (page_h - block_h) / 2;
    let left = (page_w - content.width) / 2;
    page.blit(content, left, top);

    let bar_left = (page_w - bar_len) / 2;
    let bar_top = top + content.height + gap;
    page.fill_rect(
        bar_left,
        bar_top + tick_h - bar_thick,
        bar_len,
        bar_thick,
        BLACK,
    );
    for cm in 0..=10u32 {
        let x = bar_left + ((cm as f64 / 10.0) * (bar_len - 1) as f64).round() as u32;
        let h = if cm % 5 == 0 { tick_h } else { tick_h / 2 + 1 };
        page.fill_rect(x, bar_top + tick_h - h, 1, h, BLACK);
    }

    let (ax, ay) = render.axis_pixel();
    Ok(SheetLayout {
        image: page,
        sheet,
        content_origin: (left, top),
        circle_center: (left as f64 + ax, top as f64 + ay),
        circle_diameter_px: px(2.0 * render.radius, dpi),
        scale_bar_origin: (bar_left, bar_top),
        scale_bar_px: bar_len,
    })
}
