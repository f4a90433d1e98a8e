//! Deterministic exporters for developed complexes: an annotated SVG net and
//! a planar OBJ mesh.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::decomposition::ParallelogramComplex;
use crate::developing::DevelopedComplex;

/// Fixed palette cycled over loop labels for strokes and the legend.
const PALETTE: [&str; 8] = [
    "#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085", "#7f8c8d", "#b8860b",
];

#[derive(Debug, Clone)]
pub struct SvgOptions {
    /// Pixels per unit length.
    pub scale: f64,
    /// Label cone points dual to labeled cells.
    pub label_cone_points: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            scale: 100.0,
            label_cone_points: true,
        }
    }
}

fn fmt_coord(v: f64) -> String {
    // Shortest round-trip decimal; locale independent.
    format!("{}", (v * 1e6).round() / 1e6)
}

/// One polygon element per quad in developed position, edges colored by the
/// crossed loop, labeled cone points, and a loop-color legend. The viewBox
/// fits the content with a 5% margin.
pub fn export_svg(
    cx: &ParallelogramComplex,
    dev: &DevelopedComplex,
    options: &SvgOptions,
) -> String {
    let s = options.scale;
    let mut min = [f64::INFINITY, f64::INFINITY];
    let mut max = [f64::NEG_INFINITY, f64::NEG_INFINITY];
    let mut polys: Vec<[[f64; 2]; 4]> = Vec::with_capacity(cx.quads.len());
    for q in 0..cx.quads.len() {
        let corners = dev.corners(cx, q);
        for c in &corners {
            min[0] = min[0].min(c[0] * s);
            min[1] = min[1].min(c[1] * s);
            max[0] = max[0].max(c[0] * s);
            max[1] = max[1].max(c[1] * s);
        }
        polys.push(corners);
    }
    if polys.is_empty() {
        min = [0.0, 0.0];
        max = [1.0, 1.0];
    }
    let w = (max[0] - min[0]).max(1e-9);
    let h = (max[1] - min[1]).max(1e-9);
    let margin = 0.05 * w.max(h);
    // Legend strip below the content.
    let legend_h = 18.0 * cx.arr.n_loops() as f64 + 10.0;
    let vb = format!(
        "{} {} {} {}",
        fmt_coord(min[0] - margin),
        fmt_coord(min[1] - margin),
        fmt_coord(w + 2.0 * margin),
        fmt_coord(h + 2.0 * margin + legend_h)
    );
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vb}\">"
    );
    for (q, corners) in polys.iter().enumerate() {
        let pts: Vec<String> = corners
            .iter()
            .map(|c| format!("{},{}", fmt_coord(c[0] * s), fmt_coord(c[1] * s)))
            .collect();
        let _ = writeln!(
            out,
            "  <polygon points=\"{}\" fill=\"#f4f1ea\" stroke=\"none\"/>",
            pts.join(" ")
        );
        // Sides stroked by crossed loop.
        for t in 0..4 {
            let a = corners[t];
            let b = corners[(t + 1) % 4];
            let lp = cx.quads[q].side_loop[t];
            let _ = writeln!(
                out,
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"1\"/>",
                fmt_coord(a[0] * s),
                fmt_coord(a[1] * s),
                fmt_coord(b[0] * s),
                fmt_coord(b[1] * s),
                PALETTE[lp % PALETTE.len()]
            );
        }
    }
    if options.label_cone_points {
        let mut seen: BTreeMap<String, [f64; 2]> = BTreeMap::new();
        for (q, quad) in cx.quads.iter().enumerate() {
            let corners = dev.corners(cx, q);
            for (slot, face) in quad.corners.iter().enumerate() {
                for l in &cx.cone_points[face.0].enclosed {
                    seen.entry(l.to_string()).or_insert(corners[slot]);
                }
            }
        }
        for (label, pos) in seen {
            let _ = writeln!(
                out,
                "  <text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#222\">{}</text>",
                fmt_coord(pos[0] * s),
                fmt_coord(pos[1] * s),
                label
            );
        }
    }
    for (i, l) in cx.arr.loops.iter().enumerate() {
        let y = max[1] + margin + 18.0 * (i + 1) as f64;
        let _ = writeln!(
            out,
            "  <rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>",
            fmt_coord(min[0]),
            fmt_coord(y - 10.0),
            PALETTE[i % PALETTE.len()]
        );
        let _ = writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#222\">{}</text>",
            fmt_coord(min[0] + 16.0),
            fmt_coord(y),
            l.label
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Planar OBJ net at z = 0: one face per quad, shared vertices merged when
/// coincident within 1e−9.
pub fn export_obj(cx: &ParallelogramComplex, dev: &DevelopedComplex) -> String {
    let quant = |v: f64| -> i64 { (v / 1e-9).round() as i64 };
    let mut index: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut verts: Vec<[f64; 2]> = Vec::new();
    let mut faces: Vec<[usize; 4]> = Vec::new();
    for q in 0..cx.quads.len() {
        let corners = dev.corners(cx, q);
        let mut ids = [0usize; 4];
        for (t, c) in corners.iter().enumerate() {
            let key = (quant(c[0]), quant(c[1]));
            let id = *index.entry(key).or_insert_with(|| {
                verts.push(*c);
                verts.len() - 1
            });
            ids[t] = id;
        }
        faces.push(ids);
    }
    let mut out = String::new();
    let _ = writeln!(out, "# conesphere developed net ({} faces)", faces.len());
    for v in &verts {
        let _ = writeln!(out, "v {} {} 0", v[0], v[1]);
    }
    for f in &faces {
        let _ = writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
    }
    out
}

/// Re-imports an OBJ net and sums signed face areas; the oracle for export
/// fidelity.
pub fn obj_total_area(text: &str) -> f64 {
    let mut verts: Vec<[f64; 2]> = Vec::new();
    let mut total = 0.0;
    for line in text.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let x: f64 = it.next().unwrap_or("0").parse().unwrap_or(0.0);
                let y: f64 = it.next().unwrap_or("0").parse().unwrap_or(0.0);
                verts.push([x, y]);
            }
            Some("f") => {
                let ids: Vec<usize> = it.map(|t| t.parse::<usize>().unwrap_or(1) - 1).collect();
                let mut a = 0.0;
                for w in 0..ids.len() {
                    let p = verts[ids[w]];
                    let q = verts[ids[(w + 1) % ids.len()]];
                    a += p[0] * q[1] - q[0] * p[1];
                }
                total += a.abs() / 2.0;
            }
            _ => {}
        }
    }
    total
}
