use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use catoptrics_core::raster::{png_pixels_per_meter, RasterImage};
use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catoptrics"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).trim().to_string()
}

fn sidecar(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_two_with_key_value_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["pool", "--depth", "10"][..],
        &["pool", "--frobnicate"],
        &["caustic2d", "--rays", "many"],
        &["ruler", "--length", "3 parsecs"],
        &[],
    ] {
        let out = run(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        let err = stderr(&out);
        assert!(err.starts_with("error="), "{args:?}: {err}");
        assert!(
            !err.contains('\n'),
            "single diagnostic line expected: {err}"
        );
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn help_and_version_succeed() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &["--version"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &["pool", "--help"]).status.code(), Some(0));
}

#[test]
fn domain_and_io_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["archer", "--angle", "50deg"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stderr(&out),
        "error=outside_snells_window angle_deg=50.000000"
    );

    let out = run(dir.path(), &["anamorph", "--image", "missing.png"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing.png"), "{}", stderr(&out));

    let out = run(dir.path(), &["pool", "--out", "no/such/dir/pool.svg"]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn flag_beats_config_beats_default() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("scene.conf"),
        "# tube\nradius = 3cm\neye-height = 0.5m\n",
    )
    .unwrap();

    run(dir.path(), &["virtual-surface", "--out", "default.svg"]);
    run(
        dir.path(),
        &[
            "--config",
            "scene.conf",
            "virtual-surface",
            "--out",
            "config.svg",
        ],
    );
    let out = run(
        dir.path(),
        &[
            "--config",
            "scene.conf",
            "virtual-surface",
            "--radius",
            "2cm",
            "--out",
            "flag.svg",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));

    let meters = |name: &str, key: &str| {
        sidecar(&dir.path().join(name))["scene"][key]["meters"]
            .as_f64()
            .unwrap()
    };
    assert!((meters("default.json", "radius") - 0.025).abs() < 1e-15);
    assert!((meters("config.json", "radius") - 0.03).abs() < 1e-15);
    assert!((meters("flag.json", "radius") - 0.02).abs() < 1e-15);
    assert!((meters("flag.json", "eye_height") - 0.5).abs() < 1e-15);
    assert!((meters("default.json", "eye_height") - 0.4).abs() < 1e-15);
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.conf"), "raduis = 3cm\n").unwrap();
    let out = run(dir.path(), &["--config", "bad.conf", "pool"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("raduis"));
}

#[test]
fn sidecar_echoes_inputs_in_si() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "pool",
            "--depth",
            "7ft",
            "--eye-height",
            "1.5m",
            "--gaze",
            "0.7rad",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let doc = sidecar(&dir.path().join("pool.json"));
    let depth = &doc["inputs"]["depth"];
    assert_eq!(depth["unit"], "ft");
    assert!((depth["meters"].as_f64().unwrap() - 7.0 * 0.3048).abs() < 1e-12);
    assert!((doc["inputs"]["eye_height"]["meters"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((doc["inputs"]["gaze"]["radians"].as_f64().unwrap() - 0.7).abs() < 1e-12);
    assert_eq!(doc["outputs"], serde_json::json!(["pool.svg", "pool.csv"]));
}

#[test]
fn caustic_figure_has_enough_reflected_rays() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["caustic2d"]).status.success());
    let svg = std::fs::read_to_string(dir.path().join("caustic2d.svg")).unwrap();
    let start = svg.find("<g id=\"reflected-rays\"").unwrap();
    let end = start + svg[start..].find("</g>").unwrap();
    let rays = svg[start..end].matches("<polyline").count();
    assert!(rays >= 200, "{rays} reflected rays");
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));

    let csv = std::fs::read_to_string(dir.path().join("caustic2d.csv")).unwrap();
    assert!(csv.starts_with("parameter,x,y,z\r\n"));
}

#[test]
fn anamorph_of_a_single_pixel_is_uniform() {
    let dir = tempfile::tempdir().unwrap();
    RasterImage::from_fn(1, 1, 72.0, |_, _| [200, 30, 30])
        .write_png(&dir.path().join("dot.png"))
        .unwrap();
    let out = run(
        dir.path(),
        &["anamorph", "--image", "dot.png", "--out", "sheet.png"],
    );
    assert!(out.status.success(), "{}", stderr(&out));

    let bytes = std::fs::read(dir.path().join("sheet.png")).unwrap();
    assert_eq!(png_pixels_per_meter(&bytes), Some(11811));
    let sheet = RasterImage::load(&dir.path().join("sheet.png"), 300.0).unwrap();
    assert_eq!((sheet.width, sheet.height), (2480, 3508));
    let mut colors = BTreeSet::new();
    for y in 0..sheet.height {
        for x in 0..sheet.width {
            colors.insert(sheet.get(x, y));
        }
    }
    let expected: BTreeSet<[u8; 3]> = [[0, 0, 0], [200, 30, 30], [255, 255, 255]].into();
    assert_eq!(colors, expected);
    let coverage = sidecar(&dir.path().join("sheet.json"))["metrics"]["coverage"]
        .as_f64()
        .unwrap();
    assert!(coverage > 0.0 && coverage < 1.0);
}

#[test]
fn ppm_output_is_selected_by_extension() {
    let dir = tempfile::tempdir().unwrap();
    RasterImage::from_fn(4, 8, 72.0, |_, _| [255, 255, 255])
        .write_png(&dir.path().join("w.png"))
        .unwrap();
    let out = run(
        dir.path(),
        &[
            "anamorph", "--image", "w.png", "--out", "w.ppm", "--dpi", "100", "--sheet", "letter",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let bytes = std::fs::read(dir.path().join("w.ppm")).unwrap();
    assert!(bytes.starts_with(b"P6"));
}

#[test]
fn every_figure_command_writes_three_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, stem) in [
        ("caustic2d", "caustic2d"),
        ("rainbow", "rainbow"),
        ("virtual-surface", "virtual-surface"),
        ("blur-spot", "blur-spot"),
        ("pool", "pool"),
        ("ruler", "ruler"),
        ("archer", "archer"),
    ] {
        let out = run(dir.path(), &[cmd]);
        assert!(out.status.success(), "{cmd}: {}", stderr(&out));
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(
            stdout.contains(&format!("json={stem}.json")),
            "{cmd}: {stdout}"
        );
        for ext in ["svg", "csv", "json"] {
            let p = dir.path().join(format!("{stem}.{ext}"));
            assert!(p.exists(), "{cmd}: missing {}", p.display());
        }
        assert_eq!(
            sidecar(&dir.path().join(format!("{stem}.json")))["command"],
            cmd
        );
    }
}

#[test]
fn heights_off_the_tube_are_rejected_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["virtual-surface", "--heights", "30cm,40cm"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("flag=--heights"), "{}", stderr(&out));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
