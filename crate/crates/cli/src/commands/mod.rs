//! One module per family of subcommands.

mod anamorph;
mod mirror;
mod rainbow;
mod water;

use std::path::Path;

use catoptrics_core::cylinder::DistanceOrigin;
use catoptrics_core::units::{Length, LengthUnit};
use catoptrics_core::Scene;
use serde_json::{json, Value};

use crate::args::{Cli, Command, DistanceFrom, SceneArgs};
use crate::config::FileConfig;
use crate::diag::{line, CliError};
use crate::output::{length_json, sibling, write_atomic, Sidecar, Table};
use crate::svg::SvgFigure;

/// Everything resolved before a subcommand runs.
pub struct Context {
    pub config: FileConfig,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let ctx = Context { config };
    match cli.command {
        Command::Anamorph(a) => anamorph::run(&ctx, a),
        Command::Caustic2d(a) => mirror::caustic2d(&ctx, a),
        Command::Rainbow(a) => rainbow::run(a),
        Command::VirtualSurface(a) => mirror::virtual_surface(&ctx, a),
        Command::BlurSpot(a) => mirror::blur_spot(&ctx, a),
        Command::Pool(a) => water::pool(&ctx, a),
        Command::Ruler(a) => water::ruler(&ctx, a),
        Command::Archer(a) => water::archer(a),
    }
}

/// Flag, then config file, then built-in default.
fn pick(flag: Option<Length>, file: Option<Length>, default: Length) -> Length {
    flag.or(file).unwrap_or(default)
}

fn cm(v: f64) -> Length {
    Length::new(v, LengthUnit::Cm)
}

/// Cylinder scene from flags and config, and its echo for the sidecar.
fn resolve_scene(args: &SceneArgs, cfg: &FileConfig) -> Result<(Scene, Value), CliError> {
    let radius = pick(args.radius, cfg.radius, cm(2.5));
    let distance = pick(args.eye_distance, cfg.eye_distance, cm(25.0));
    let height = pick(args.eye_height, cfg.eye_height, cm(40.0));
    let tube = pick(args.cylinder_height, cfg.cylinder_height, cm(25.0));
    let from = args
        .distance_from
        .or(cfg.distance_from)
        .unwrap_or(DistanceFrom::Surface);
    let origin = match from {
        DistanceFrom::Surface => DistanceOrigin::Surface,
        DistanceFrom::Axis => DistanceOrigin::Axis,
    };
    let scene = Scene::with_eye_distance(
        radius.to_meters(),
        distance.to_meters(),
        height.to_meters(),
        origin,
        tube.to_meters(),
    )?;
    let echo = json!({
        "radius": length_json(radius),
        "eye_distance": length_json(distance),
        "eye_height": length_json(height),
        "distance_from": match from { DistanceFrom::Surface => "surface", DistanceFrom::Axis => "axis" },
        "cylinder_height": length_json(tube),
        "eye_m": [scene.eye.x, scene.eye.y, scene.eye.z],
    });
    Ok((scene, echo))
}

/// Writes the figure, its CSV table and the sidecar, then reports them on
/// stdout.
fn emit(
    out: &Path,
    figure: &SvgFigure,
    table: Table,
    mut sidecar: Sidecar,
    summary: &[(&str, String)],
) -> Result<(), CliError> {
    let csv_path = sibling(out, "csv");
    let json_path = sibling(out, "json");
    write_atomic(out, figure.to_svg().as_bytes())?;
    write_atomic(&csv_path, &table.into_bytes())?;
    sidecar.output(out).output(&csv_path);
    write_atomic(&json_path, &sidecar.to_bytes())?;
    let mut pairs: Vec<(&str, String)> = summary.to_vec();
    pairs.push(("svg", out.display().to_string()));
    pairs.push(("csv", csv_path.display().to_string()));
    pairs.push(("json", json_path.display().to_string()));
    println!("{}", line(&pairs));
    Ok(())
}

/// Horizontal projection used by the top-view figures.
fn xy(p: catoptrics_core::Vec3) -> [f64; 2] {
    [p.x, p.y]
}

/// Side view: horizontal distance along `x`, height as `z`.
fn xz(p: catoptrics_core::Vec3) -> [f64; 2] {
    [p.x, p.z]
}

/// Shortest round-trip decimal, for stdout.
fn f(v: f64) -> String {
    v.to_string()
}
