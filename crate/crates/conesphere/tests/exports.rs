//! Exporters: deterministic SVG, planar OBJ with merged vertices, and the
//! reimport area oracle.

mod util;

use conesphere::decomposition::{build_complex, total_area, EdgeLengths};
use conesphere::developing::{unfold, TreePolicy};
use conesphere::export::{export_obj, export_svg, obj_total_area, SvgOptions};
use conesphere::geom::Rng;

#[test]
fn svg_has_one_polygon_per_quad_and_is_deterministic() {
    let cat = util::catalog();
    let e = util::entry(&cat, "N4-A1");
    let cx = build_complex(&e.arrangement, &EdgeLengths::uniform(6, 1.0)).unwrap();
    let base = e.frame.as_ref().unwrap().entries[0].path[0];
    let dev = unfold(&cx, base, TreePolicy::BfsByQuadIndex).unwrap();
    let svg = export_svg(&cx, &dev, &SvgOptions::default());
    assert_eq!(svg.matches("<polygon").count(), 30);
    assert!(svg.contains("viewBox"));
    // Legend: one swatch per loop.
    assert_eq!(svg.matches("<rect").count(), 6);
    let again = export_svg(&cx, &dev, &SvgOptions::default());
    assert_eq!(svg, again, "re-export must be byte-identical");
}

#[test]
fn obj_is_planar_and_reimports_to_the_same_area() {
    let cat = util::catalog();
    let e = util::entry(&cat, "N5-T1");
    let mut rng = Rng::new(4);
    let lengths = util::random_lengths(&mut rng, 8);
    let cx = build_complex(&e.arrangement, &lengths).unwrap();
    let base = e.frame.as_ref().unwrap().entries[0].path[0];
    let dev = unfold(&cx, base, TreePolicy::BfsByQuadIndex).unwrap();
    let obj = export_obj(&cx, &dev);
    let faces = obj.lines().filter(|l| l.starts_with("f ")).count();
    assert_eq!(faces, 56, "one face per parallelogram");
    for line in obj.lines().filter(|l| l.starts_with("v ")) {
        assert!(line.ends_with(" 0"), "all vertices at z = 0: {line}");
    }
    let reimported = obj_total_area(&obj);
    let direct = total_area(&cx);
    assert!(
        (reimported - direct).abs() < 1e-9,
        "OBJ reimport area {reimported} vs {direct}"
    );
}
