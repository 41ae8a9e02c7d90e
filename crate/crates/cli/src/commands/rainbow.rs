use catoptrics_core::caustics::families::RaindropExit;
use catoptrics_core::caustics::{
    deviation_histogram, envelope_2d, rainbow_minimum, PlanarRayFamily,
};
use serde_json::json;

use super::{emit, f, xy};
use crate::args::RainbowArgs;
use crate::diag::CliError;
use crate::output::{angle_json, length_json, Sidecar, Table};
use crate::svg::{Layer, SvgFigure};

pub fn run(a: RainbowArgs) -> Result<(), CliError> {
    if !(a.n > 1.0 && a.n < 2.0) {
        return Err(CliError::usage("--n", "expected an index between 1 and 2"));
    }
    let max_angle = a.max_angle.to_radians();
    if !(max_angle > 0.0 && max_angle <= std::f64::consts::PI) {
        return Err(CliError::usage(
            "--max-angle",
            "expected an angle in (0, 180] degrees",
        ));
    }
    let r = a.drop_radius.to_meters();
    if !(r > 0.0) {
        return Err(CliError::usage("--drop-radius", "must be positive"));
    }
    let min = rainbow_minimum(a.n);
    let hist = deviation_histogram(a.n, a.samples as usize, a.bins as usize, max_angle);

    let mut table = Table::new(&["bin_start_deg", "bin_end_deg", "count"]);
    let width = max_angle.to_degrees() / a.bins as f64;
    for (i, c) in hist.iter().enumerate() {
        table.row([
            (i as f64 * width).to_string(),
            ((i + 1) as f64 * width).to_string(),
            c.to_string(),
        ]);
    }

    let drop = RaindropExit { n: a.n, radius: r };
    let mut sun = Layer::new("sunlight", "#bbbbbb", 0.15);
    let mut inside = Layer::new("inside", "#0050c0", 0.15);
    let mut exits = Layer::new("exit-rays", "#e08000", 0.15);
    for k in 0..a.rays {
        let b = (k as f64 + 0.5) / a.rays as f64;
        let ([entry, back, exit], Ok(ray)) = (drop.path(b)?, drop.ray(b)) else {
            continue;
        };
        sun.segment([entry.x + 1.5 * r, entry.y], xy(entry));
        inside.polyline([xy(entry), xy(back), xy(exit)]);
        exits.segment(xy(exit), xy(ray.at(1.5 * r)));
    }
    let mut bow = Layer::new("minimum-deviation", "#c00000", 0.35);
    if let (Ok([entry, back, exit]), Ok(ray)) = (drop.path(min.impact), drop.ray(min.impact)) {
        bow.polyline([
            [entry.x + 1.5 * r, entry.y],
            xy(entry),
            xy(back),
            xy(exit),
            xy(ray.at(1.5 * r)),
        ]);
    }
    let params: Vec<f64> = (0..400).map(|k| 0.02 + 0.96 * k as f64 / 399.0).collect();
    let caustic = envelope_2d(&drop, &params);
    let mut envelope = Layer::new("caustic", "#800080", 0.25);
    envelope.polyline(caustic.samples.iter().map(|s| match s.point {
        Some(p) if s.ray_distance > 0.0 && p.horizontal().norm() <= 2.5 * r => xy(p),
        _ => [f64::NAN, f64::NAN],
    }));
    let mut outline = Layer::new("drop", "black", 0.4);
    outline.circle([0.0, 0.0], r);
    let mut fig = SvgFigure::new("Rays through a drop after one internal reflection");
    fig.push(sun)
        .push(inside)
        .push(exits)
        .push(envelope)
        .push(bow)
        .push(outline);

    let fold_bin = (min.rainbow_angle / max_angle * a.bins as f64).floor() as usize;
    let beyond: usize = hist.iter().skip(fold_bin + 1).sum();
    let mut sidecar = Sidecar::new("rainbow");
    sidecar
        .input("n", json!(a.n))
        .input("samples", json!(a.samples))
        .input("bins", json!(a.bins))
        .input("max_angle", angle_json(a.max_angle))
        .input("drop_radius", length_json(a.drop_radius))
        .metric("impact", min.impact)
        .metric("min_deviation_deg", min.deviation.to_degrees())
        .metric("rainbow_angle_deg", min.rainbow_angle.to_degrees())
        .metric("fold_bin", fold_bin)
        .metric("samples_beyond_fold", beyond);
    emit(
        &a.out,
        &fig,
        table,
        sidecar,
        &[
            ("rainbow_angle_deg", f(min.rainbow_angle.to_degrees())),
            ("impact", f(min.impact)),
            ("samples_beyond_fold", beyond.to_string()),
        ],
    )
}
