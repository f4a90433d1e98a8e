//! Shared helpers for the integration suites.
#![allow(dead_code)]

use conesphere::arrangement::search::LoopSpec;
use conesphere::arrangement::{LabeledVertexSet, LoopArrangement};
use conesphere::catalog::{builtin, Catalog, CatalogEntry};
use conesphere::decomposition::EdgeLengths;
use conesphere::geom::{Rng, UnitVec3};

pub fn catalog() -> Catalog {
    builtin().expect("builtin catalog parses")
}

pub fn entry(cat: &Catalog, name: &str) -> CatalogEntry {
    cat.entry(name)
        .unwrap_or_else(|| panic!("catalog entry {name}"))
        .clone()
}

/// Random strictly positive lengths in [0.1, 2).
pub fn random_lengths(rng: &mut Rng, k: usize) -> EdgeLengths {
    EdgeLengths((0..k).map(|_| rng.range(0.1, 2.0)).collect())
}

/// Random positive deficits summing to 2π.
pub fn random_deficits(rng: &mut Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.range(0.3, 1.7)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v * std::f64::consts::TAU / s).collect()
}

pub fn cube_vertices() -> LabeledVertexSet {
    let s = 1.0 / 3.0f64.sqrt();
    LabeledVertexSet::new(vec![
        UnitVec3::new(s, s, s).unwrap(),
        UnitVec3::new(-s, s, s).unwrap(),
        UnitVec3::new(-s, -s, s).unwrap(),
        UnitVec3::new(s, -s, s).unwrap(),
    ])
}

/// Bipartition spec of the reference 6-loop chart.
pub fn n4_reference_specs() -> Vec<LoopSpec> {
    [
        ("a", vec![0usize, 1]),
        ("b", vec![0, 2, 3]),
        ("c", vec![0, 1, 2]),
        ("d", vec![0, 3]),
        ("e", vec![0, 1, 2, 3]),
        ("f", vec![0]),
    ]
    .into_iter()
    .map(|(l, p)| LoopSpec {
        label: l.to_string(),
        plus_pairs: p,
    })
    .collect()
}

/// Witness point inside an octant of three loops.
pub fn octant_witness(arr: &LoopArrangement, lps: [usize; 3], signs: [i8; 3]) -> Option<UnitVec3> {
    let mut acc = [0.0f64; 3];
    for t in 0..3 {
        let a = lps[t];
        let b = lps[(t + 1) % 3];
        let other = lps[(t + 2) % 3];
        let c = arr.loops[a].normal.cross(&arr.loops[b].normal);
        let p = conesphere::geom::normalize3(c).ok()?;
        let want = signs[(t + 2) % 3];
        let d = arr.loops[other].normal.dot(&p);
        let corner = if (d > 0.0) == (want > 0) {
            p
        } else {
            p.antipode()
        };
        acc[0] += corner.x;
        acc[1] += corner.y;
        acc[2] += corner.z;
    }
    conesphere::geom::normalize3(acc).ok()
}
