use catoptrics_core::anamorph::{build_map, render, sheet_layout, AnamorphKind, RenderSpec};
use catoptrics_core::raster::RasterImage;
use catoptrics_core::units::Length;
use serde_json::json;

use super::{cm, f, resolve_scene, Context};
use crate::args::AnamorphArgs;
use crate::diag::{line, CliError};
use crate::output::{length_json, sibling, write_atomic, Sidecar};

/// Default picture width; the flat construction magnifies the most.
fn default_width_cm(kind: AnamorphKind) -> f64 {
    match kind {
        AnamorphKind::Erect | AnamorphKind::ThreeD => 4.0,
        AnamorphKind::Flat => 3.0,
    }
}

pub fn run(ctx: &Context, a: AnamorphArgs) -> Result<(), CliError> {
    if !(a.dpi.is_finite() && a.dpi >= 10.0 && a.dpi <= 2400.0) {
        return Err(CliError::usage(
            "--dpi",
            "expected a resolution between 10 and 2400",
        ));
    }
    let (scene, scene_echo) = resolve_scene(&a.scene, &ctx.config)?;
    let src = RasterImage::load(&a.image, a.dpi).map_err(|e| CliError::io(&a.image, e))?;
    if src.width == 0 || src.height == 0 {
        return Err(CliError::io(&a.image, "empty picture"));
    }
    let aspect = src.width as f64 / src.height as f64;
    let (width, height) = match (a.picture_width, a.picture_height) {
        (Some(w), Some(h)) => (w, h),
        (Some(w), None) => (w, Length::new(w.value / aspect, w.unit)),
        (None, Some(h)) => (Length::new(h.value * aspect, h.unit), h),
        (None, None) => {
            let w = default_width_cm(a.kind);
            (cm(w), cm(w / aspect))
        }
    };

    let map = build_map(a.kind, scene, width.to_meters(), height.to_meters())?;
    let rendered = render(
        &map,
        &src,
        RenderSpec {
            dpi: a.dpi,
            ..RenderSpec::default()
        },
    )?;
    let sheet = sheet_layout(&rendered, a.sheet)?;

    let ppm = a
        .out
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("ppm"));
    let bytes = if ppm {
        sheet.image.encode_ppm()
    } else {
        sheet.image.encode_png()?
    };
    write_atomic(&a.out, &bytes)?;

    let json_path = sibling(&a.out, "json");
    let unreachable = rendered.unreachable as f64 / rendered.total as f64;
    let mut sidecar = Sidecar::new("anamorph");
    sidecar
        .input("kind", json!(a.kind.name()))
        .input("image", json!(crate::output::file_name(&a.image)))
        .input("picture_width", length_json(width))
        .input("picture_height", length_json(height))
        .input("dpi", json!(a.dpi))
        .input("sheet", json!(a.sheet.to_string()))
        .scene(scene_echo)
        .metric("coverage", rendered.coverage())
        .metric("unreachable_fraction", unreachable)
        .metric(
            "drawing_px",
            json!([rendered.image.width, rendered.image.height]),
        )
        .metric("sheet_px", json!([sheet.image.width, sheet.image.height]))
        .metric(
            "circle_center_px",
            json!([sheet.circle_center.0, sheet.circle_center.1]),
        )
        .metric("circle_diameter_px", sheet.circle_diameter_px)
        .metric("scale_bar_px", sheet.scale_bar_px)
        .metric(
            "pixels_per_meter",
            (a.dpi / catoptrics_core::raster::METERS_PER_INCH).round(),
        )
        .output(&a.out);
    write_atomic(&json_path, &sidecar.to_bytes())?;

    println!(
        "{}",
        line(&[
            ("kind", a.kind.name().into()),
            ("coverage", f(rendered.coverage())),
            (
                "sheet_px",
                format!("{}x{}", sheet.image.width, sheet.image.height)
            ),
            ("image", a.out.display().to_string()),
            ("json", json_path.display().to_string()),
        ])
    );
    Ok(())
}
