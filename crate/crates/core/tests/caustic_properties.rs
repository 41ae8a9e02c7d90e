use catoptrics_core::caustics::families::CircleReflection;
use catoptrics_core::caustics::{
    blur_spot, deviation_histogram, envelope_2d, focus_distances, rainbow_deviation,
    rainbow_minimum, Elongation, PlanarRayFamily,
};
use catoptrics_core::{Ray, Scene, Vec3};

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn rotate(p: Vec3, a: f64) -> Vec3 {
    Vec3::new(
        p.x * a.cos() - p.y * a.sin(),
        p.x * a.sin() + p.y * a.cos(),
        p.z,
    )
}

/// Intersection of two planar rays' supporting lines.
fn line_intersection(a: &Ray, b: &Ray) -> Option<Vec3> {
    let (d1, d2) = (a.direction, b.direction);
    let den = d1.x * d2.y - d1.y * d2.x;
    if den.abs() < 1e-300 {
        return None;
    }
    let w = b.origin - a.origin;
    let s = (w.x * d2.y - w.y * d2.x) / den;
    Some(a.at(s))
}

#[test]
fn parallel_beam_cusp_at_half_radius_by_brute_force() {
    let r = 1.0;
    let fam = CircleReflection::parallel(r, -Vec3::X);
    let (lo, hi) = fam.domain();
    let n = 10_000;
    let rays: Vec<Ray> = (0..n)
        .map(|k| {
            fam.ray(lo + (hi - lo) * (k as f64 + 0.5) / n as f64)
                .unwrap()
        })
        .collect();
    // The adjacent pair straddling the axis meets on it at the cusp.
    let mid = n / 2;
    let p = line_intersection(&rays[mid - 1], &rays[mid]).unwrap();
    assert!(p.y.abs() < 1e-12);
    assert!((p.x.abs() - r / 2.0).abs() < 1e-6 * r, "{p:?}");
    // The cusp is the innermost point of the brute-force caustic.
    let innermost = rays
        .windows(2)
        .filter_map(|w| line_intersection(&w[0], &w[1]))
        .map(|q| q.horizontal().norm())
        .fold(f64::INFINITY, f64::min);
    assert!((innermost - r / 2.0).abs() < 1e-6 * r, "{innermost}");
    // The envelope computation puts its cusp at the same place.
    let sheet = envelope_2d(&fam, &grid(lo * 0.99, hi * 0.99, 301));
    let cusps: Vec<_> = sheet.cusps().collect();
    assert_eq!(cusps.len(), 1);
    let c = cusps[0].point.unwrap();
    assert!(
        (c.horizontal().norm() - r / 2.0).abs() < 1e-4 * r && c.y.abs() < 1e-2 * r,
        "{c:?}"
    );
}

#[test]
fn envelope_rotates_with_configuration() {
    let params = grid(-1.4, 1.4, 201);
    let base = envelope_2d(
        &CircleReflection::point(1.0, Vec3::new(3.0, 0.5, 0.0)),
        &params,
    );
    for &a in &[0.3, 1.7, -2.2] {
        let rotated = envelope_2d(
            &CircleReflection::point(1.0, rotate(Vec3::new(3.0, 0.5, 0.0), a)),
            &params,
        );
        for (s0, s1) in base.samples.iter().zip(&rotated.samples) {
            match (s0.point, s1.point) {
                (Some(p), Some(q)) => assert!((rotate(p, a) - q).norm() < 1e-9, "{a}: {p:?} {q:?}"),
                (None, None) => {}
                _ => panic!("degenerate sample differs under rotation"),
            }
        }
    }
}

#[test]
fn far_point_source_matches_parallel_beam() {
    let r = 1.0;
    let dir = Vec3::new(-1.0, 0.2, 0.0).normalized();
    let params = grid(-1.4, 1.4, 281);
    let parallel = envelope_2d(&CircleReflection::parallel(r, dir), &params);
    let far = envelope_2d(&CircleReflection::point(r, -dir * (1e6 * r)), &params);
    let mut compared = 0;
    for (a, b) in parallel.samples.iter().zip(&far.samples) {
        if let (Some(p), Some(q)) = (a.point, b.point) {
            assert!((p - q).norm() < 1e-4 * r, "{p:?} {q:?}");
            compared += 1;
        }
    }
    assert!(compared > 270);
}

#[test]
fn source_on_circle_gives_closed_cardioid() {
    let r = 1.0;
    let s = Vec3::new(r, 0.0, 0.0);
    let fam = CircleReflection::point(r, s);
    let (lo, hi) = fam.domain();
    let sheet = envelope_2d(&fam, &grid(lo + 1e-4, hi - 1e-4, 2001));
    let pts: Vec<Vec3> = sheet.points().collect();
    assert_eq!(pts.len(), 2001);
    // Both ends return to the source: the curve closes there.
    assert!((pts[0] - s).norm() < 1e-3 && (pts[2000] - s).norm() < 1e-3);
    // The single cusp is opposite the source, at the concave-mirror image
    // of the source on the axis: 1/s + 1/s' = 2/R with s = 2R gives s' = 2R/3.
    let cusps: Vec<_> = sheet.cusps().collect();
    assert_eq!(cusps.len(), 1);
    let cusp = cusps[0].point.unwrap();
    assert!(
        (cusp - Vec3::new(-r / 3.0, 0.0, 0.0)).norm() < 1e-5,
        "{cusp:?}"
    );
    assert!(
        (pts[1000] - Vec3::new(-r / 3.0, 0.0, 0.0)).norm() < 1e-9,
        "{:?}",
        pts[1000]
    );
    // The two ends join smoothly at the source.
    let t0 = (pts[1] - pts[0]).normalized();
    let t1 = (pts[1999] - pts[2000]).normalized();
    assert!(
        t0.dot(t1) < -0.99,
        "tangents at the closure point: {t0:?} {t1:?}"
    );
}

#[test]
fn rainbow_minimum_is_unique() {
    for &n in &[1.2, 1.333, 1.5, 1.9] {
        let samples = 100_000;
        let values: Vec<f64> = (0..samples)
            .map(|k| rainbow_deviation(n, (k as f64 + 0.5) / samples as f64))
            .collect();
        let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let changes = diffs
            .windows(2)
            .filter(|w| w[0].signum() != w[1].signum())
            .count();
        assert_eq!(changes, 1, "n = {n}");
    }
    let m = rainbow_minimum(1.333);
    assert!((m.rainbow_angle.to_degrees() - 42.0).abs() < 0.1);
}

#[test]
fn rainbow_histogram_piles_up_on_the_inside_of_the_fold() {
    let max = 60f64.to_radians();
    let bins = 120;
    let hist = deviation_histogram(1.333, 1_000_000, bins, max);
    let fold = (rainbow_minimum(1.333).rainbow_angle / max * bins as f64) as usize;
    assert!(
        hist[fold + 1..].iter().all(|&c| c == 0),
        "light beyond the bow"
    );
    assert!(hist[fold - 1] > 5 * hist[fold / 2]);
}

#[test]
fn astigmatism_flips_once_between_the_foci() {
    let scene = Scene::standard();
    let p = scene.surface_point(0.3, 0.08);
    let source = scene.trace_to_table(p).unwrap();
    let (d_h, d_v) = focus_distances(&scene, p, source).unwrap();
    let at_h = blur_spot(&scene, 0.004, d_h, source, p).unwrap();
    let at_v = blur_spot(&scene, 0.004, d_v, source, p).unwrap();
    assert_eq!(at_h.orientation, Elongation::Vertical);
    assert_eq!(at_v.orientation, Elongation::Horizontal);
    let ratios: Vec<f64> = (0..=200)
        .map(|k| {
            let f = d_h + (d_v - d_h) * k as f64 / 200.0;
            blur_spot(&scene, 0.004, f, source, p).unwrap().aspect()
        })
        .collect();
    let crossings = ratios
        .windows(2)
        .filter(|w| (w[0] - 1.0).signum() != (w[1] - 1.0).signum())
        .count();
    assert_eq!(crossings, 1, "{ratios:?}");
}
