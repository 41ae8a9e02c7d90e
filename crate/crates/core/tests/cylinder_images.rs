//! Closed-form H/V images of the tube against the vanishing-Jacobian scan.

use catoptrics_core::caustics::families::CylinderMirrorFamily;
use catoptrics_core::caustics::focal_points_on_chief_ray;
use catoptrics_core::geometry::transverse_basis;
use catoptrics_core::{Scene, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scan(scene: &Scene, p: Vec3, source: Vec3) -> (f64, f64) {
    let fam = CylinderMirrorFamily::new(scene.radius, source, p);
    let out = (scene.eye - p).normalized();
    let (h_axis, _) = transverse_basis(out);
    let range = 10.0 * scene.eye.distance(p);
    let fp = focal_points_on_chief_ray(&fam, [0.0, 0.0], h_axis, range).unwrap();
    (-fp.t_h, -fp.t_v)
}

#[test]
fn default_scene_matches_scan() {
    let scene = Scene::standard();
    let p = scene.surface_point(0.0, 0.08);
    let t = scene.trace_to_table(p).unwrap();
    let pair = scene.image_pair(p, t).unwrap();
    let (h, v) = scan(&scene, p, t);
    assert!(
        (h - pair.h_distance).abs() < 1e-4 * pair.h_distance,
        "{h} {}",
        pair.h_distance
    );
    assert!(
        (v - pair.v_distance).abs() < 1e-6 * pair.v_distance,
        "{v} {}",
        pair.v_distance
    );
}

#[test]
fn random_sight_lines_match_scan() {
    let scene = Scene::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let limit = scene.visible_half_angle() * 0.9;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let phi = rng.gen_range(-limit..limit);
        let z = rng.gen_range(0.005..0.2);
        let p = scene.surface_point(phi, z);
        let t = scene.trace_to_table(p).unwrap();
        let pair = scene.image_pair(p, t).unwrap();
        let (h, v) = scan(&scene, p, t);
        worst = worst
            .max((h - pair.h_distance).abs() / pair.h_distance)
            .max((v - pair.v_distance).abs() / pair.v_distance);
    }
    println!("worst relative deviation {worst:e}");
    assert!(worst < 1e-4);
}
