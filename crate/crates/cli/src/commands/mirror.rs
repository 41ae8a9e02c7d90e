use catoptrics_core::caustics::families::CircleReflection;
use catoptrics_core::caustics::{self, envelope_2d, focus_distances, PlanarRayFamily};
use catoptrics_core::Vec3;
use serde_json::json;

use super::{cm, emit, f, pick, resolve_scene, xy, Context};
use crate::args::{BeamKind, BlurSpotArgs, Caustic2dArgs, Focus, VirtualSurfaceArgs};
use crate::diag::CliError;
use crate::output::{angle_json, length_json, Sidecar, Table};
use crate::svg::{Layer, SvgFigure};

fn midpoints(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64)
        .collect()
}

/// Far end of a chord of the circle of radius `|origin|` leaving `origin`
/// along unit horizontal `dir`.
fn chord_end(origin: Vec3, dir: Vec3) -> Vec3 {
    origin + dir * (-2.0 * (origin.x * dir.x + origin.y * dir.y))
}

pub fn caustic2d(ctx: &Context, a: Caustic2dArgs) -> Result<(), CliError> {
    let radius = pick(a.radius, ctx.config.radius, cm(2.5));
    let r = radius.to_meters();
    let az = a.source_azimuth.to_radians();
    let toward = Vec3::new(az.cos(), az.sin(), 0.0);
    let mut sidecar = Sidecar::new("caustic2d");
    sidecar
        .input("radius", length_json(radius))
        .input("source_azimuth", angle_json(a.source_azimuth))
        .input("rays", json!(a.rays))
        .input("samples", json!(a.samples));
    let (family, source_point) = match a.source {
        BeamKind::Point => {
            let d = a.source_distance.unwrap_or(radius);
            if !(d.to_meters() >= 0.0) {
                return Err(CliError::usage("--source-distance", "must not be negative"));
            }
            sidecar
                .input("source", json!("point"))
                .input("source_distance", length_json(d));
            let s = toward * d.to_meters();
            (CircleReflection::point(r, s), Some(s))
        }
        BeamKind::Parallel => {
            if a.source_distance.is_some() {
                return Err(CliError::usage(
                    "--source-distance",
                    "only meaningful with --source point",
                ));
            }
            sidecar.input("source", json!("parallel"));
            (CircleReflection::parallel(r, -toward), None)
        }
    };

    let (lo, hi) = family.domain();
    let sheet = envelope_2d(&family, &midpoints(lo, hi, a.samples as usize));

    let mut mirror = Layer::new("mirror", "black", 0.5);
    mirror.circle([0.0, 0.0], r);
    let mut incoming = Layer::new("incoming-rays", "#bbbbbb", 0.1);
    let mut reflected = Layer::new("reflected-rays", "#e08000", 0.1);
    let mut drawn = 0usize;
    for u in midpoints(lo, hi, a.rays as usize) {
        let (Ok(inc), Ok(out)) = (family.incoming(u), family.ray(u)) else {
            continue;
        };
        incoming.segment(xy(inc.origin), xy(out.origin));
        reflected.segment(xy(out.origin), xy(chord_end(out.origin, out.direction)));
        drawn += 1;
    }
    // Only the part of the caustic near the mirror is drawn.
    let visible = |p: Vec3| p.horizontal().norm() <= 2.0 * r;
    let mut envelope = Layer::new("caustic", "#c00000", 0.35);
    envelope.polyline(sheet.samples.iter().map(|s| match s.point {
        Some(p) if visible(p) => xy(p),
        _ => [f64::NAN, f64::NAN],
    }));
    let mut marks = Layer::new("marks", "black", 0.1).filled("black");
    let cusps: Vec<Vec3> = sheet.cusps().filter_map(|c| c.point).collect();
    for &c in &cusps {
        marks.dot(xy(c), 0.8);
    }
    if let Some(s) = source_point {
        marks.dot(xy(s), 1.0);
    }
    let mut fig = SvgFigure::new("Rays reflected inside a circle and their caustic");
    fig.push(incoming)
        .push(reflected)
        .push(mirror)
        .push(envelope)
        .push(marks);

    let mut table = Table::new(&["parameter", "x", "y", "z"]);
    for s in &sheet.samples {
        let p = s.point;
        table.numbers(&[
            Some(s.param),
            p.map(|p| p.x),
            p.map(|p| p.y),
            p.map(|p| p.z),
        ]);
    }
    sidecar
        .metric("ray_segments", drawn)
        .metric("cusp_count", cusps.len())
        .metric(
            "cusps_m",
            json!(cusps.iter().map(|c| [c.x, c.y]).collect::<Vec<_>>()),
        )
        .metric("degenerate_samples", sheet.degenerate_count());
    emit(
        &a.out,
        &fig,
        table,
        sidecar,
        &[
            ("ray_segments", drawn.to_string()),
            ("cusps", cusps.len().to_string()),
        ],
    )
}

pub fn virtual_surface(ctx: &Context, a: VirtualSurfaceArgs) -> Result<(), CliError> {
    let (scene, echo) = resolve_scene(&a.scene, &ctx.config)?;
    let limit = 0.95 * scene.visible_half_angle();
    let n = a.azimuths as usize;
    let azimuths: Vec<f64> = (0..n)
        .map(|k| -limit + 2.0 * limit * k as f64 / (n - 1) as f64)
        .collect();
    let heights: Vec<f64> = a.heights.iter().map(|h| h.to_meters()).collect();
    if let Some(h) = heights
        .iter()
        .find(|&&h| !(h > 0.0 && h <= scene.cylinder_height))
    {
        return Err(CliError::usage(
            "--heights",
            format!("{h} m is not on the tube"),
        ));
    }
    let surface = scene.virtual_surface(&azimuths, &heights);

    let mut table = Table::new(&["azimuth_rad", "mirror_z_m", "x_m", "y_m", "z_m"]);
    for s in &surface.samples {
        let p = s.point;
        table.numbers(&[
            Some(s.azimuth),
            Some(s.z),
            p.map(|p| p.x),
            p.map(|p| p.y),
            p.map(|p| p.z),
        ]);
    }

    let mut tube = Layer::new("cylinder", "black", 0.5);
    tube.circle([0.0, 0.0], scene.radius);
    let mut sections = Layer::new("h-surface", "#0050c0", 0.25);
    let mut depths = Vec::new();
    for (i, &h) in heights.iter().enumerate() {
        let row = surface.row(i);
        sections.polyline(
            row.iter()
                .map(|s| s.point.map(xy).unwrap_or([f64::NAN, f64::NAN])),
        );
        let pts: Vec<Vec3> = row.iter().filter_map(|s| s.point).collect();
        let depth = pts
            .iter()
            .map(|p| scene.radius - p.x)
            .fold(f64::NAN, f64::min);
        let width = pts.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max)
            - pts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
        depths.push(json!({ "mirror_z_m": h, "front_depth_m": depth, "width_m": width }));
    }
    let mut labels = Layer::new("labels", "none", 0.0);
    labels.label([1.3 * scene.radius, 0.0], "to eye \u{2192}");
    let mut fig = SvgFigure::new("Cross-sections of the tangential virtual surface, top view");
    fig.push(tube).push(sections).push(labels);

    let mut sidecar = Sidecar::new("virtual-surface");
    sidecar
        .input(
            "heights",
            json!(a
                .heights
                .iter()
                .map(|&h| length_json(h))
                .collect::<Vec<_>>()),
        )
        .input("azimuths", json!(a.azimuths))
        .scene(echo)
        .metric("azimuth_limit_rad", limit)
        .metric("skipped", surface.skipped)
        .metric("sections", json!(depths));
    emit(
        &a.out,
        &fig,
        table,
        sidecar,
        &[
            ("sections", heights.len().to_string()),
            ("skipped", surface.skipped.to_string()),
        ],
    )
}

pub fn blur_spot(ctx: &Context, a: BlurSpotArgs) -> Result<(), CliError> {
    let (scene, echo) = resolve_scene(&a.scene, &ctx.config)?;
    let p = scene.surface_point(a.azimuth.to_radians(), a.z.to_meters());
    let source = scene.trace_to_table(p)?;
    let (d_h, d_v) = focus_distances(&scene, p, source)?;
    let focus = match a.focus {
        Focus::H => d_h,
        Focus::V => d_v,
        Focus::Mid => 0.5 * (d_h + d_v),
        Focus::Distance(l) => l.to_meters(),
    };
    let spot = caustics::blur_spot(&scene, a.aperture.to_meters(), focus, source, p)?;

    let mut table = Table::new(&["screen_horizontal_m", "screen_vertical_m"]);
    for q in &spot.points {
        table.numbers(&[Some(q[0]), Some(q[1])]);
    }
    let mut dots = Layer::new("spot", "none", 0.0).filled("black");
    for q in &spot.points {
        dots.dot(*q, 0.35);
    }
    let mut fig = SvgFigure::new("Blur spot on the camera screen");
    fig.push(dots);

    let orientation = serde_json::to_value(spot.orientation).unwrap_or_default();
    let focus_echo = match a.focus {
        Focus::H => json!("h"),
        Focus::V => json!("v"),
        Focus::Mid => json!("mid"),
        Focus::Distance(l) => length_json(l),
    };
    let mut sidecar = Sidecar::new("blur-spot");
    sidecar
        .input("azimuth", angle_json(a.azimuth))
        .input("z", length_json(a.z))
        .input("aperture", length_json(a.aperture))
        .input("focus", focus_echo)
        .scene(echo)
        .metric("mirror_point_m", json!([p.x, p.y, p.z]))
        .metric("source_m", json!([source.x, source.y, source.z]))
        .metric("focus_h_m", d_h)
        .metric("focus_v_m", d_v)
        .metric("focus_m", focus)
        .metric("sigma_horizontal_m", spot.sigma_horizontal)
        .metric("sigma_vertical_m", spot.sigma_vertical)
        .metric("sigma_major_m", spot.sigma_major)
        .metric("sigma_minor_m", spot.sigma_minor)
        .metric("aspect", spot.aspect())
        .metric("orientation", orientation.clone());
    emit(
        &a.out,
        &fig,
        table,
        sidecar,
        &[
            ("focus_h_m", f(d_h)),
            ("focus_v_m", f(d_v)),
            ("focus_m", f(focus)),
            (
                "orientation",
                orientation.as_str().unwrap_or("").to_string(),
            ),
            ("aspect", f(spot.aspect())),
        ],
    )
}
