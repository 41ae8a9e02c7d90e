use catoptrics_core::geometry::N_WATER;
use catoptrics_core::units::{Length, LengthUnit};
use catoptrics_core::water::{
    archer_aim, archer_aim_apparent, floor_sample, floor_slope, pool_floor_profile,
    ruler_apparent_shape, ArcherAim, FloorImage, WaterScene,
};
use catoptrics_core::Vec3;
use serde_json::json;

use super::{emit, f, pick, xz, Context};
use crate::args::{ArcherArgs, FloorImageArg, PoolArgs, RulerArgs, WaterArgs};
use crate::diag::CliError;
use crate::output::{angle_json, length_json, Sidecar, Table};
use crate::svg::{Layer, SvgFigure};

const PROFILE_FROM_DEG: f64 = 15.0;
const PROFILE_TO_DEG: f64 = 89.0;

fn index(w: &WaterArgs, ctx: &Context) -> Result<f64, CliError> {
    let n = w.n.or(ctx.config.n).unwrap_or(N_WATER);
    if !(n >= 1.0 && n.is_finite()) {
        return Err(CliError::usage("--n", "expected an index of at least 1"));
    }
    Ok(n)
}

fn image_of(arg: FloorImageArg) -> FloorImage {
    match arg {
        FloorImageArg::H => FloorImage::H,
        FloorImageArg::V => FloorImage::V,
        FloorImageArg::Back => FloorImage::BackProjection,
    }
}

fn image_name(image: FloorImage) -> &'static str {
    match image {
        FloorImage::H => "h",
        FloorImage::V => "v",
        FloorImage::BackProjection => "back",
    }
}

pub fn pool(ctx: &Context, a: PoolArgs) -> Result<(), CliError> {
    let ft = |v| Length::new(v, LengthUnit::Ft);
    let height = pick(a.water.eye_height, ctx.config.eye_height, ft(10.0));
    let depth = pick(a.depth, ctx.config.depth, ft(10.0));
    let n = index(&a.water, ctx)?;
    let ws = WaterScene::new(
        Vec3::new(0.0, 0.0, height.to_meters()),
        depth.to_meters(),
        n,
    )?;
    let gaze = a.gaze.to_radians();
    let chosen = image_of(a.image);

    let mut slopes = serde_json::Map::new();
    for image in [FloorImage::H, FloorImage::V, FloorImage::BackProjection] {
        let s = floor_slope(&ws, gaze, image)?;
        slopes.insert(
            image_name(image).to_string(),
            json!({ "along_floor_deg": s.along_floor.to_degrees(), "along_image_deg": s.along_image.to_degrees() }),
        );
    }
    let slope = floor_slope(&ws, gaze, chosen)?;
    let at_gaze = floor_sample(&ws, gaze)?;
    let overhead = floor_sample(&ws, std::f64::consts::FRAC_PI_2)?;

    let m = a.samples as usize;
    let gazes: Vec<f64> = (0..m)
        .map(|k| {
            (PROFILE_FROM_DEG + (PROFILE_TO_DEG - PROFILE_FROM_DEG) * k as f64 / (m - 1) as f64)
                .to_radians()
        })
        .collect();
    let profile = pool_floor_profile(&ws, &gazes);
    let mut table = Table::new(&[
        "gaze_deg",
        "floor_x_m",
        "floor_z_m",
        "h_x_m",
        "h_z_m",
        "v_x_m",
        "v_z_m",
        "back_x_m",
        "back_z_m",
    ]);
    let mut h_line = Layer::new("apparent-floor-h", "#c00000", 0.4);
    let mut v_line = Layer::new("apparent-floor-v", "#008000", 0.3);
    let mut back_line = Layer::new("back-projection", "#888888", 0.3);
    let mut hs = Vec::new();
    let mut vs = Vec::new();
    let mut backs = Vec::new();
    let mut far = 0.0f64;
    for (g, sample) in gazes.iter().zip(&profile) {
        match sample {
            Ok(s) => {
                table.numbers(&[
                    Some(g.to_degrees()),
                    Some(s.floor.x),
                    Some(s.floor.z),
                    Some(s.h_point.x),
                    Some(s.h_point.z),
                    Some(s.v_point.x),
                    Some(s.v_point.z),
                    Some(s.back_projection.x),
                    Some(s.back_projection.z),
                ]);
                hs.push(xz(s.h_point));
                vs.push(xz(s.v_point));
                backs.push(xz(s.back_projection));
                far = far.max(s.floor.x);
            }
            Err(_) => {
                table.numbers(&[
                    Some(g.to_degrees()),
                    None,
                    None,
                    None,
                    None,
                    None,
                    None,
                    None,
                    None,
                ]);
                for v in [&mut hs, &mut vs, &mut backs] {
                    v.push([f64::NAN, f64::NAN]);
                }
            }
        }
    }
    h_line.polyline(hs);
    v_line.polyline(vs);
    back_line.polyline(backs);
    let d = depth.to_meters();
    let mut water = Layer::new("water", "#0050c0", 0.3);
    water
        .segment([0.0, 0.0], [far, 0.0])
        .segment([0.0, -d], [far, -d]);
    let mut ray = Layer::new("chief-ray", "black", 0.2);
    ray.polyline([xz(ws.eye), xz(crossing_of(&ws, gaze)), xz(at_gaze.floor)]);
    let mut marks = Layer::new("marks", "black", 0.1).filled("black");
    marks
        .dot(xz(ws.eye), 1.0)
        .dot(xz(at_gaze.image(chosen)), 0.8);
    let mut fig = SvgFigure::new("Apparent pool floor seen from the edge, side view");
    fig.push(water)
        .push(back_line)
        .push(v_line)
        .push(h_line)
        .push(ray)
        .push(marks);

    let mut sidecar = Sidecar::new("pool");
    sidecar
        .input("eye_height", length_json(height))
        .input("depth", length_json(depth))
        .input("gaze", angle_json(a.gaze))
        .input("n", json!(n))
        .input("image", json!(image_name(chosen)))
        .metric("slope_deg", slope.along_floor.to_degrees())
        .metric("slope_along_image_deg", slope.along_image.to_degrees())
        .metric("slopes", serde_json::Value::Object(slopes))
        .metric("floor_point_m", json!([at_gaze.floor.x, at_gaze.floor.z]))
        .metric(
            "apparent_point_m",
            json!([at_gaze.image(chosen).x, at_gaze.image(chosen).z]),
        )
        .metric("overhead_apparent_depth_m", -overhead.h_point.z)
        .metric("paraxial_depth_m", d / n);
    emit(
        &a.out,
        &fig,
        table,
        sidecar,
        &[
            ("image", image_name(chosen).into()),
            ("slope_deg", f(slope.along_floor.to_degrees())),
            ("slope_along_image_deg", f(slope.along_image.to_degrees())),
            ("overhead_apparent_depth_m", f(-overhead.h_point.z)),
        ],
    )
}

fn crossing_of(ws: &WaterScene, gaze: f64) -> Vec3 {
    ws.eye + Vec3::new(gaze.cos(), 0.0, -gaze.sin()) * (ws.eye.z / gaze.sin())
}

pub fn ruler(ctx: &Context, a: RulerArgs) -> Result<(), CliError> {
    let height = pick(
        a.water.eye_height,
        ctx.config.eye_height,
        Length::new(30.0, LengthUnit::Cm),
    );
    let n = index(&a.water, ctx)?;
    let length = a.length.to_meters();
    if !(length > 0.0) {
        return Err(CliError::usage("--length", "must be positive"));
    }
    let ws = WaterScene::new(Vec3::new(0.0, 0.0, height.to_meters()), length, n)?;
    let foot = Vec3::new(a.distance.to_meters(), 0.0, 0.0);
    let shape = ruler_apparent_shape(&ws, foot, length, a.samples as usize);

    let mut table = Table::new(&["depth_m", "h_x_m", "h_z_m", "v_x_m", "v_z_m"]);
    for ((d, h), v) in shape
        .depths
        .iter()
        .zip(&shape.h_points)
        .zip(&shape.v_points)
    {
        table.numbers(&[Some(*d), Some(h.x), Some(h.z), Some(v.x), Some(v.z)]);
    }
    let x = foot.x;
    let mut water = Layer::new("water", "#0050c0", 0.3);
    water.segment([x - 0.6 * length, 0.0], [x + 0.3 * length, 0.0]);
    let mut stick = Layer::new("ruler", "black", 0.5);
    stick.segment([x, 0.0], [x, -length]);
    let mut h_curve = Layer::new("h-image", "#c00000", 0.4);
    h_curve.polyline(shape.h_points.iter().map(|&p| xz(p)));
    let mut v_curve = Layer::new("v-image", "#008000", 0.3);
    v_curve.polyline(shape.v_points.iter().map(|&p| xz(p)));
    let mut labels = Layer::new("labels", "none", 0.0);
    labels.label([x - 0.6 * length, 0.03 * length], "\u{2190} eye");
    let mut fig = SvgFigure::new("Apparent shape of a dipped ruler, side view");
    fig.push(water)
        .push(stick)
        .push(v_curve)
        .push(h_curve)
        .push(labels);

    let max_sep = shape.separations().into_iter().fold(0.0f64, f64::max);
    let mut sidecar = Sidecar::new("ruler");
    sidecar
        .input("eye_height", length_json(height))
        .input("distance", length_json(a.distance))
        .input("length", length_json(a.length))
        .input("n", json!(n))
        .metric("h_max_deviation_m", shape.h_max_deviation())
        .metric("max_h_v_separation_m", max_sep)
        .metric("dropped", shape.dropped);
    emit(
        &a.out,
        &fig,
        table,
        sidecar,
        &[
            ("h_max_deviation_m", f(shape.h_max_deviation())),
            ("dropped", shape.dropped.to_string()),
        ],
    )
}

pub fn archer(a: ArcherArgs) -> Result<(), CliError> {
    if !(a.n >= 1.0 && a.n.is_finite()) {
        return Err(CliError::usage("--n", "expected an index of at least 1"));
    }
    let fish_depth = a.fish_depth.to_meters();
    if !(fish_depth > 0.0) {
        return Err(CliError::usage("--fish-depth", "must be positive"));
    }
    let fish = Vec3::new(0.0, 0.0, -fish_depth);
    let mut sidecar = Sidecar::new("archer");
    sidecar.input("n", json!(a.n));
    let (aim, target): (ArcherAim, Option<Vec3>) = match a.angle {
        Some(angle) => {
            sidecar.input("angle", angle_json(angle));
            (archer_aim_apparent(a.n, angle.to_radians())?, None)
        }
        None => {
            if !(a.target_height.to_meters() > 0.0) {
                return Err(CliError::usage("--target-height", "must be positive"));
            }
            sidecar
                .input("fish_depth", length_json(a.fish_depth))
                .input("target_height", length_json(a.target_height))
                .input("target_distance", length_json(a.target_distance));
            let target = Vec3::new(
                a.target_distance.to_meters(),
                0.0,
                a.target_height.to_meters(),
            );
            let ws = WaterScene::new(fish, 2.0 * fish_depth, a.n)?;
            (archer_aim(&ws, target)?, Some(target))
        }
    };
    let critical = (1.0 / a.n).asin();

    // Where the apparent line of sight meets the surface.
    let crossing = fish + aim.apparent * (fish_depth / aim.apparent.z);
    let reach = target.map(|t| t.z).unwrap_or(fish_depth);
    let mut water = Layer::new("water", "#0050c0", 0.3);
    let half = fish_depth * critical.tan() * 1.3 + crossing.x.abs();
    water.segment([-half, 0.0], [half, 0.0]);
    let mut window = Layer::new("snells-window", "#88aadd", 0.2);
    for s in [-1.0, 1.0] {
        window.segment(xz(fish), [s * fish_depth * critical.tan(), 0.0]);
    }
    let mut seen = Layer::new("apparent-direction", "#c00000", 0.35);
    seen.segment(
        xz(fish),
        xz(crossing + aim.apparent * (reach / aim.apparent.z)),
    );
    let mut light = Layer::new("light-path", "black", 0.25);
    let beyond = crossing + aim.true_direction * (reach / aim.true_direction.z.max(1e-9));
    light.polyline([xz(fish), xz(crossing), xz(target.unwrap_or(beyond))]);
    let mut marks = Layer::new("marks", "black", 0.1).filled("black");
    marks.dot(xz(fish), 1.0);
    if let Some(t) = target {
        marks.dot(xz(t), 1.0);
    }
    let mut fig =
        SvgFigure::new("Archer fish: apparent and true directions of a target in the air");
    fig.push(water)
        .push(window)
        .push(light)
        .push(seen)
        .push(marks);

    let mut table = Table::new(&["quantity", "value"]);
    let rows = [
        ("underwater_angle_deg", aim.underwater_angle.to_degrees()),
        ("correction_deg", aim.correction.to_degrees()),
        ("critical_angle_deg", critical.to_degrees()),
    ];
    for (k, v) in rows {
        table.row([k.to_string(), v.to_string()]);
    }
    sidecar
        .metric("underwater_angle_deg", aim.underwater_angle.to_degrees())
        .metric("correction_deg", aim.correction.to_degrees())
        .metric("critical_angle_deg", critical.to_degrees())
        .metric(
            "apparent",
            json!([aim.apparent.x, aim.apparent.y, aim.apparent.z]),
        )
        .metric(
            "true_direction",
            json!([
                aim.true_direction.x,
                aim.true_direction.y,
                aim.true_direction.z
            ]),
        );
    emit(
        &a.out,
        &fig,
        table,
        sidecar,
        &[
            ("underwater_angle_deg", f(aim.underwater_angle.to_degrees())),
            ("correction_deg", f(aim.correction.to_degrees())),
        ],
    )
}
