//! End-to-end CLI checks driving the built binary on catalog-derived files.

use std::path::PathBuf;
use std::process::{Command, Output};

use conesphere::catalog::builtin;
use conesphere::io::{serialize_arrangement, serialize_frame_spec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conesphere"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("conesphere-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_fixture(name: &str, content: &str) -> PathBuf {
    let p = tmp(name);
    std::fs::write(&p, content).unwrap();
    p
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn validate_accepts_catalog_entry_and_rejects_duplicates() {
    let cat = builtin().unwrap();
    let e = cat.entry("N4-A1").unwrap();
    let good = write_fixture("a1.json", &serialize_arrangement(&e.arrangement));
    let out = bin().arg("validate").arg(&good).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let mut broken = e.arrangement.clone();
    broken.loops[1].normal = broken.loops[0].normal;
    let bad = write_fixture("a1-bad.json", &serialize_arrangement(&broken));
    let out = bin().arg("validate").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("violation"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn audit_passes_on_a_valid_surface() {
    let cat = builtin().unwrap();
    let e = cat.entry("N4-A1").unwrap();
    let arr = write_fixture("a1-arr.json", &serialize_arrangement(&e.arrangement));
    let lengths = write_fixture(
        "a1-len.json",
        r#"{"a": 1.0, "b": 0.7, "c": 1.3, "d": 0.4, "e": 0.9, "f": 1.1}"#,
    );
    let out = bin()
        .arg("audit")
        .arg("--arr")
        .arg(&arr)
        .arg("--lengths")
        .arg(&lengths)
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"pass\": true"));
}

#[test]
fn surface_file_with_inline_arrangement_builds() {
    let cat = builtin().unwrap();
    let e = cat.entry("N4-A1").unwrap();
    let arr_json = serialize_arrangement(&e.arrangement);
    let surface = write_fixture(
        "a1-surface.json",
        &format!(
            r#"{{"arrangement": {arr_json}, "lengths": {{"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.0, "e": 1.0, "f": 1.0}}}}"#
        ),
    );
    let out = bin()
        .arg("build")
        .arg("--surface")
        .arg(&surface)
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"quads\": 30"));
}

#[test]
fn compare_sides_reports_different_for_the_reference_pair() {
    let cat = builtin().unwrap();
    let pair = cat.pair("N4-sigma-a").unwrap();
    let a = cat.entry(&pair.chart_a).unwrap();
    let b = cat.entry(&pair.chart_b).unwrap();
    let fa = serialize_frame_spec(&a.arrangement, &pair.frame_a);
    let fb = serialize_frame_spec(&b.arrangement, &pair.frame_b);
    let pa = write_fixture("pair-a.json", &serialize_arrangement(&a.arrangement));
    let pb = write_fixture("pair-b.json", &serialize_arrangement(&b.arrangement));
    let frames = write_fixture(
        "pair-frames.json",
        &format!(r#"{{"frame_a": {fa}, "frame_b": {fb}}}"#),
    );
    let out = bin()
        .arg("compare-sides")
        .arg("--a")
        .arg(&pa)
        .arg("--b")
        .arg(&pb)
        .arg("--loop")
        .arg("a")
        .arg("--frame")
        .arg(&frames)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout(&out).trim(), "different");
}

#[test]
fn search_realizes_a_spec_deterministically() {
    let spec = write_fixture(
        "search-spec.json",
        r#"{
  "n_pairs": 4,
  "vertices": [[0.57735, 0.57735, 0.57735], [-0.57735, 0.57735, 0.57735],
               [-0.57735, -0.57735, 0.57735], [0.57735, -0.57735, 0.57735]],
  "deficits": [1.5707963267948966, 1.5707963267948966, 1.5707963267948966, 1.5707963267948966],
  "loops": [
    {"label": "a", "plus": [1, 2]},
    {"label": "b", "plus": [1, 3, 4]},
    {"label": "c", "plus": [1, 2, 3]},
    {"label": "d", "plus": [1, 4]},
    {"label": "e", "plus": [1, 2, 3, 4]},
    {"label": "f", "plus": [1]}
  ]
}"#,
    );
    let run = || {
        let out = bin()
            .arg("search")
            .arg("--spec")
            .arg(&spec)
            .arg("--seed")
            .arg("7")
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        stdout(&out)
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "same seed, same arrangement");
    // The searched arrangement validates.
    let found = write_fixture("searched.json", &first);
    let out = bin().arg("validate").arg(&found).output().unwrap();
    assert!(out.status.success());
}

#[test]
fn unfold_exports_are_deterministic() {
    let cat = builtin().unwrap();
    let e = cat.entry("N4-A1").unwrap();
    let arr = write_fixture("unfold-arr.json", &serialize_arrangement(&e.arrangement));
    let lengths = write_fixture(
        "unfold-len.json",
        r#"{"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.0, "e": 1.0, "f": 1.0}"#,
    );
    let svg1 = tmp("net1.svg");
    let svg2 = tmp("net2.svg");
    let obj1 = tmp("net1.obj");
    for (svg, obj) in [(&svg1, &obj1), (&svg2, &obj1)] {
        let out = bin()
            .arg("unfold")
            .arg("--arr")
            .arg(&arr)
            .arg("--lengths")
            .arg(&lengths)
            .arg("--svg")
            .arg(svg)
            .arg("--obj")
            .arg(obj)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = std::fs::read(&svg1).unwrap();
    let b = std::fs::read(&svg2).unwrap();
    assert_eq!(a, b, "SVG re-export must be byte-identical");
    let obj = std::fs::read_to_string(&obj1).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 30);
}

#[test]
fn distance_simplex_and_orbit_queries() {
    let cat = builtin().unwrap();
    let e = cat.entry("N4-A1").unwrap();
    let arr_json = serialize_arrangement(&e.arrangement);
    let x = write_fixture(
        "dist-x.json",
        &format!(
            r#"{{"arrangement": {arr_json}, "lengths": {{"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.0, "e": 1.0, "f": 1.0}}}}"#
        ),
    );
    let y = write_fixture(
        "dist-y.json",
        &format!(
            r#"{{"arrangement": {arr_json}, "lengths": {{"a": 2.0, "b": 0.5, "c": 1.0, "d": 1.5, "e": 0.8, "f": 1.2}}}}"#
        ),
    );
    let out = bin()
        .arg("distance")
        .arg("--x")
        .arg(&x)
        .arg("--y")
        .arg(&y)
        .output()
        .unwrap();
    assert!(out.status.success());
    let d: f64 = stdout(&out).trim().parse().unwrap();
    assert!(d > 0.0 && d.is_finite());
    // Distance of a surface to itself is zero.
    let out = bin()
        .arg("distance")
        .arg("--x")
        .arg(&x)
        .arg("--y")
        .arg(&x)
        .output()
        .unwrap();
    let d0: f64 = stdout(&out).trim().parse().unwrap();
    assert_eq!(d0, 0.0);

    let arr = write_fixture("sx-arr.json", &arr_json);
    let out = bin()
        .arg("simplex-check")
        .arg("--arr")
        .arg(&arr)
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"vertices\": 6"));

    let lengths = write_fixture("orbit-len.json", "[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]");
    let out = bin()
        .arg("orbit")
        .arg("--lengths")
        .arg(&lengths)
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"orbit_size\": 12"));
}

#[test]
fn parse_errors_are_structured_not_panics() {
    let bad = write_fixture("bad.json", "{\n  \"n_pairs\": oops\n}");
    let out = bin().arg("validate").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error"), "stderr: {err}");
}

#[test]
fn tolerance_flag_scales_the_audit() {
    let cat = builtin().unwrap();
    let e = cat.entry("N4-A1").unwrap();
    // Irrational deficit splits leave genuine rounding noise in the angle
    // sums (uniform π/2 deficits audit bit-exactly).
    let mut arr_data = e.arrangement.clone();
    let tau = std::f64::consts::TAU;
    arr_data.deficits = vec![1.3, 1.9, 1.7, tau - 4.9];
    let arr = write_fixture("tol-arr.json", &serialize_arrangement(&arr_data));
    let lengths = write_fixture(
        "tol-len.json",
        r#"{"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.0, "e": 1.0, "f": 1.0}"#,
    );
    // An absurdly small tolerance scale makes that noise fail the audit.
    let out = bin()
        .arg("audit")
        .arg("--arr")
        .arg(&arr)
        .arg("--lengths")
        .arg(&lengths)
        .arg("--tolerance")
        .arg("1e-12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
