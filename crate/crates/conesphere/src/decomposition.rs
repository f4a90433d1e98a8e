//! From a valid arrangement and per-loop edge lengths to the glued
//! parallelogram complex (the cone surface), its cone-angle audit, and the
//! area quadratic form.
//!
//! The dual complex has one quadrilateral per loop-intersection point. A
//! corner of the quad at l_i ∩ l_j sits in one of the four lunes of the pair,
//! and its angle is
//!
//!   θ = π − ½ Σ δ_n   over labels n with a representative inside that lune,
//!
//! so adjacent corners are supplementary and the quad is a parallelogram with
//! side lengths ℓ_i, ℓ_j. Gluing along dual arcs produces a surface whose
//! cone angle at the dual vertex of a cell P is 2π − Σ_{n ∈ P} δ_n, so the
//! glued surface carries exactly the prescribed deficits; the audit checks
//! that equality at every cone point.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arrangement::cells::{cell_complex, ArcId, CellComplex, FaceId};
use crate::arrangement::{
    lune_deficit_sum, validate, ArrangementError, LoopArrangement, SignedLabel,
};
use crate::geom::UnitVec3;
use crate::linalg::{jacobi_eigenvalues, Mat};

#[derive(Debug, Error, PartialEq)]
pub enum DecompError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("cell is not incident to the intersection of loops `{0}` and `{1}`")]
    NotIncident(String, String),
    #[error("lengths: {0}")]
    BadLengths(String),
}

/// Per-loop edge lengths, aligned with the arrangement's loop order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLengths(pub Vec<f64>);

impl EdgeLengths {
    pub fn uniform(k: usize, v: f64) -> Self {
        EdgeLengths(vec![v; k])
    }

    pub fn from_map(
        arr: &LoopArrangement,
        by_label: &BTreeMap<String, f64>,
    ) -> Result<Self, DecompError> {
        let mut out = Vec::with_capacity(arr.n_loops());
        for l in &arr.loops {
            let v = by_label.get(&l.label).ok_or_else(|| {
                DecompError::BadLengths(format!("missing length for loop `{}`", l.label))
            })?;
            out.push(*v);
        }
        if out.iter().any(|v| *v < 0.0 || !v.is_finite()) {
            return Err(DecompError::BadLengths(
                "lengths must be finite and nonnegative".to_string(),
            ));
        }
        Ok(EdgeLengths(out))
    }
}

/// Identity of a quad: the loop pair (indices, i < j) and which of the two
/// antipodal intersection points (+1 is the `normalize(n_i × n_j)` side).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadKey {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
}

/// A solid parallelogram of the decomposition.
///
/// Corners are in counterclockwise order; side `t` joins corner `t` to corner
/// `t+1`, crosses `side_loop[t]`, and has length `side_len[t]`. The corner
/// order is rotated so side 0 crosses loop `key.i`.
#[derive(Debug, Clone)]
pub struct Quad {
    pub key: QuadKey,
    pub corners: [FaceId; 4],
    pub quadrants: [(i8, i8); 4],
    pub angles: [f64; 4],
    pub side_loop: [usize; 4],
    pub side_len: [f64; 4],
    pub side_arc: [ArcId; 4],
}

impl Quad {
    /// True when every side has length zero (fully collapsed).
    pub fn is_fully_collapsed(&self) -> bool {
        self.side_len.iter().all(|l| *l == 0.0)
    }

    /// True when some side has length zero.
    pub fn is_degenerate(&self) -> bool {
        self.side_len.contains(&0.0)
    }

    /// Slot of the given corner face.
    pub fn corner_slot(&self, f: FaceId) -> Option<usize> {
        self.corners.iter().position(|c| *c == f)
    }

    /// Local planar corner coordinates: corner 0 at the origin, side 0 along
    /// +x, counterclockwise.
    pub fn local_corners(&self) -> [[f64; 2]; 4] {
        let t0 = self.angles[0];
        let c0 = [0.0, 0.0];
        let c1 = [self.side_len[0], 0.0];
        let c3 = [self.side_len[3] * t0.cos(), self.side_len[3] * t0.sin()];
        let c2 = [c1[0] + c3[0], c1[1] + c3[1]];
        [c0, c1, c2, c3]
    }

    /// Local heading of side `t` (direction corner t → t+1). Analytic in the
    /// corner angle, hence well defined even for zero-length sides.
    pub fn local_heading(&self, t: usize) -> f64 {
        match t {
            0 => 0.0,
            1 => self.angles[0],
            2 => std::f64::consts::PI,
            3 => std::f64::consts::PI + self.angles[0],
            _ => unreachable!(),
        }
    }

    /// Parallelogram area ℓ_i ℓ_j sin θ.
    pub fn area(&self) -> f64 {
        self.side_len[0] * self.side_len[1] * self.angles[0].sin()
    }
}

/// Dual vertex of the complex (one per arrangement cell): a cone point of
/// the glued surface.
#[derive(Debug, Clone)]
pub struct ConePoint {
    pub face: FaceId,
    pub enclosed: Vec<SignedLabel>,
    /// Incident quad corners as (quad index, corner slot).
    pub corners: Vec<(usize, usize)>,
}

/// The glued parallelogram complex.
#[derive(Debug, Clone)]
pub struct ParallelogramComplex {
    pub arr: LoopArrangement,
    pub lengths: EdgeLengths,
    pub cells: CellComplex,
    /// One per intersection point, in the cell complex's point order, so a
    /// `PointId` doubles as a quad index.
    pub quads: Vec<Quad>,
    /// Indexed by `FaceId`.
    pub cone_points: Vec<ConePoint>,
    /// For each arc, the two (quad, slot) glued along it.
    pub arc_sides: Vec<[(usize, usize); 2]>,
    /// Non-fatal oddities, e.g. a corner angle within 1e−9 of π (an empty
    /// lune at a quad corner), which a strict reading of θ ∈ (0, π) would
    /// forbid but which only limits of valid data can reach.
    pub warnings: Vec<String>,
    quad_index: BTreeMap<QuadKey, usize>,
}

impl ParallelogramComplex {
    pub fn quad_id(&self, key: QuadKey) -> Option<usize> {
        self.quad_index.get(&key).copied()
    }

    /// The quad glued across side `slot` of `quad`, with the matching slot.
    pub fn neighbor(&self, quad: usize, slot: usize) -> (usize, usize) {
        let arc = self.quads[quad].side_arc[slot];
        let [a, b] = self.arc_sides[arc.0];
        if a == (quad, slot) {
            b
        } else {
            a
        }
    }

    pub fn antipodal_quad(&self, quad: usize) -> usize {
        let k = self.quads[quad].key;
        self.quad_id(QuadKey {
            i: k.i,
            j: k.j,
            sign: -k.sign,
        })
        .unwrap()
    }

    /// Euler characteristic of the glued complex.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.cone_points.len() as i64;
        let e = self.arc_sides.len() as i64;
        let f = self.quads.len() as i64;
        v - e + f
    }
}

/// Corner angle of the quad of (l_i, l_j) at a corner in the given cell,
/// computed from the lune containing the cell's witness.
pub fn corner_angle(
    arr: &LoopArrangement,
    cells: &CellComplex,
    lp_i: usize,
    lp_j: usize,
    cell: FaceId,
) -> Result<f64, DecompError> {
    let incident = cells
        .point_id(lp_i, lp_j, 1)
        .map(|p| cells.corner_faces[p.0].contains(&cell))
        .unwrap_or(false)
        || cells
            .point_id(lp_i, lp_j, -1)
            .map(|p| cells.corner_faces[p.0].contains(&cell))
            .unwrap_or(false);
    if !incident {
        return Err(DecompError::NotIncident(
            arr.loops[lp_i].label.clone(),
            arr.loops[lp_j].label.clone(),
        ));
    }
    let witness = cells.faces[cell.0].witness;
    angle_from_lune(arr, lp_i, lp_j, &witness)
}

/// θ = π − ½ Σ_{n ∈ lune(witness)} δ_n.
pub fn angle_from_lune(
    arr: &LoopArrangement,
    lp_i: usize,
    lp_j: usize,
    witness: &UnitVec3,
) -> Result<f64, DecompError> {
    let s = lune_deficit_sum(arr, lp_i, lp_j, witness)?;
    Ok(std::f64::consts::PI - 0.5 * s)
}

/// Builds the glued complex for the given lengths.
pub fn build_complex(
    arr: &LoopArrangement,
    lengths: &EdgeLengths,
) -> Result<ParallelogramComplex, DecompError> {
    if lengths.0.len() != arr.n_loops() {
        return Err(DecompError::BadLengths(format!(
            "{} lengths for {} loops",
            lengths.0.len(),
            arr.n_loops()
        )));
    }
    if lengths.0.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(DecompError::BadLengths(
            "lengths must be finite and nonnegative".to_string(),
        ));
    }
    let cells = cell_complex(arr)?;
    let signs = arr.sign_vectors()?;

    let mut quads = Vec::with_capacity(cells.points.len());
    let mut quad_index = BTreeMap::new();
    let mut arc_slot_map: BTreeMap<ArcId, Vec<(usize, usize)>> = BTreeMap::new();
    for (pid, pt) in cells.points.iter().enumerate() {
        let (i, j) = pt.loops;
        let corners0 = cells.corner_faces[pid];
        let quadrants0 = cells.corner_quadrants[pid];
        // Rotate the cyclic order so side 0 crosses loop i; of the two such
        // rotations take the one starting at the smaller quadrant pair.
        let crossing_of_side = |t: usize| -> usize {
            let (sa, ta) = quadrants0[t];
            let (sb, tb) = quadrants0[(t + 1) % 4];
            if sa != sb && ta == tb {
                i
            } else if sa == sb && ta != tb {
                j
            } else {
                unreachable!("consecutive corners differ in exactly one sign")
            }
        };
        let mut start = None;
        for r in 0..4 {
            if crossing_of_side(r) == i {
                let better = match start {
                    None => true,
                    Some(s) => quadrants0[r] < quadrants0[s],
                };
                if better {
                    start = Some(r);
                }
            }
        }
        let start = start.expect("two sides cross loop i");
        let rot = |t: usize| (start + t) % 4;
        let corners = [
            corners0[rot(0)],
            corners0[rot(1)],
            corners0[rot(2)],
            corners0[rot(3)],
        ];
        let quadrants = [
            quadrants0[rot(0)],
            quadrants0[rot(1)],
            quadrants0[rot(2)],
            quadrants0[rot(3)],
        ];
        let mut angles = [0.0f64; 4];
        for (slot, (s, t)) in quadrants.iter().enumerate() {
            let mut sum = 0.0;
            for (pair, d) in arr.deficits.iter().enumerate() {
                if signs[i][pair] * signs[j][pair] == s * t {
                    sum += d;
                }
            }
            angles[slot] = std::f64::consts::PI - 0.5 * sum;
        }
        let mut side_loop = [0usize; 4];
        let mut side_len = [0.0f64; 4];
        let mut side_arc = [ArcId(0); 4];
        for t in 0..4 {
            let crossed = {
                let (sa, ta) = quadrants[t];
                let (sb, tb) = quadrants[(t + 1) % 4];
                if sa != sb {
                    debug_assert_eq!(ta, tb);
                    i
                } else {
                    debug_assert_ne!(ta, tb);
                    j
                }
            };
            let other = if crossed == i { j } else { i };
            // Shared sign on the non-crossed loop picks which of the two
            // incident arcs of the crossed loop the side is dual to.
            let shared = if crossed == i {
                quadrants[t].1
            } else {
                quadrants[t].0
            };
            let arc = cells
                .arc_at(
                    arr,
                    crate::arrangement::cells::PointId(pid),
                    crossed,
                    other,
                    shared,
                )
                .ok_or_else(|| {
                    DecompError::Arrangement(ArrangementError::DegenerateArrangement(
                        "missing side arc".to_string(),
                    ))
                })?;
            side_loop[t] = crossed;
            side_len[t] = lengths.0[crossed];
            side_arc[t] = arc;
        }
        let key = QuadKey {
            i,
            j,
            sign: pt.sign,
        };
        let idx = quads.len();
        for (t, arc) in side_arc.iter().enumerate() {
            arc_slot_map.entry(*arc).or_default().push((idx, t));
        }
        quad_index.insert(key, idx);
        quads.push(Quad {
            key,
            corners,
            quadrants,
            angles,
            side_loop,
            side_len,
            side_arc,
        });
    }

    let mut arc_sides = vec![[(usize::MAX, 0usize); 2]; cells.arcs.len()];
    for (arc, slots) in &arc_slot_map {
        if slots.len() != 2 {
            return Err(DecompError::Arrangement(
                ArrangementError::DegenerateArrangement(format!(
                    "arc #{} is a side of {} quads",
                    arc.0,
                    slots.len()
                )),
            ));
        }
        arc_sides[arc.0] = [slots[0], slots[1]];
    }

    let mut warnings = Vec::new();
    for quad in &quads {
        for (slot, theta) in quad.angles.iter().enumerate() {
            if *theta >= std::f64::consts::PI - 1e-9 {
                warnings.push(format!(
                    "quad {:?} corner {slot} has angle {theta} within 1e-9 of π (empty lune)",
                    quad.key
                ));
            }
        }
    }

    let mut cone_points: Vec<ConePoint> = cells
        .faces
        .iter()
        .enumerate()
        .map(|(f, face)| ConePoint {
            face: FaceId(f),
            enclosed: face.enclosed.clone(),
            corners: Vec::new(),
        })
        .collect();
    for (q, quad) in quads.iter().enumerate() {
        for (slot, c) in quad.corners.iter().enumerate() {
            cone_points[c.0].corners.push((q, slot));
        }
    }

    // Gluing sanity: the two sides identified along an arc join the same two
    // cone points with opposite orientation, and carry the same length.
    for (arc, sides) in arc_sides.iter().enumerate() {
        let (qa, sa) = sides[0];
        let (qb, sb) = sides[1];
        let a = &quads[qa];
        let b = &quads[qb];
        if a.side_loop[sa] != b.side_loop[sb] {
            return Err(DecompError::Arrangement(
                ArrangementError::DegenerateArrangement(format!(
                    "arc #{arc} glues sides of different loops"
                )),
            ));
        }
        let ends_a = (a.corners[sa], a.corners[(sa + 1) % 4]);
        let ends_b = (b.corners[sb], b.corners[(sb + 1) % 4]);
        if ends_a != (ends_b.1, ends_b.0) {
            return Err(DecompError::Arrangement(
                ArrangementError::DegenerateArrangement(format!(
                    "arc #{arc} glues sides with mismatched cone points"
                )),
            ));
        }
    }

    Ok(ParallelogramComplex {
        arr: arr.clone(),
        lengths: lengths.clone(),
        cells,
        quads,
        cone_points,
        arc_sides,
        warnings,
        quad_index,
    })
}

/// Cone angle at a dual vertex: the sum of incident corner angles.
///
/// Quads with both side lengths zero are fully collapsed and do not
/// contribute; degenerate quads with a single zero side still do.
pub fn cone_angle_at(cx: &ParallelogramComplex, cone: FaceId) -> f64 {
    cx.cone_points[cone.0]
        .corners
        .iter()
        .filter(|(q, _)| !cx.quads[*q].is_fully_collapsed())
        .map(|(q, slot)| cx.quads[*q].angles[*slot])
        .sum()
}

/// One row of the cone-deficit audit.
#[derive(Debug, Clone)]
pub struct DeficitRow {
    pub cone: FaceId,
    pub enclosed: Vec<SignedLabel>,
    pub expected: f64,
    pub measured: f64,
    pub error: f64,
    pub pass: bool,
}

/// Audit of every cone point against the prescribed deficits.
#[derive(Debug, Clone)]
pub struct DeficitAudit {
    pub rows: Vec<DeficitRow>,
    pub total_measured: f64,
    pub total_pass: bool,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks that every cone point carries deficit Σ δ_n over its enclosed
/// labels (δ_n at a labeled cell, 0 at an unlabeled one) and that the total
/// deficit is 4π.
pub fn verify_cone_deficits(
    cx: &ParallelogramComplex,
    deficits: &[f64],
    tolerance: f64,
) -> DeficitAudit {
    let mut rows = Vec::with_capacity(cx.cone_points.len());
    let mut total = 0.0;
    for cone in &cx.cone_points {
        let measured = std::f64::consts::TAU - cone_angle_at(cx, cone.face);
        let expected: f64 = cone.enclosed.iter().map(|l| deficits[l.pair]).sum();
        let error = (measured - expected).abs();
        total += measured;
        rows.push(DeficitRow {
            cone: cone.face,
            enclosed: cone.enclosed.clone(),
            expected,
            measured,
            error,
            pass: error <= tolerance,
        });
    }
    let total_pass = (total - 2.0 * std::f64::consts::TAU).abs() <= 10.0 * tolerance;
    let pass = total_pass && rows.iter().all(|r| r.pass);
    DeficitAudit {
        rows,
        total_measured: total,
        total_pass,
        tolerance,
        pass,
    }
}

/// Total surface area: the sum of parallelogram areas ℓ_i ℓ_j sin θ.
pub fn total_area(cx: &ParallelogramComplex) -> f64 {
    cx.quads.iter().map(Quad::area).sum()
}

/// Audits a batch of length vectors against the same arrangement.
///
/// Runs the per-vector audits in parallel when the `parallel` feature is
/// enabled; the output order matches the input order either way, so results
/// are independent of scheduling.
pub fn batch_audit(
    arr: &LoopArrangement,
    batch: &[EdgeLengths],
    deficits: &[f64],
    tolerance: f64,
) -> Result<Vec<DeficitAudit>, DecompError> {
    let run = |l: &EdgeLengths| -> Result<DeficitAudit, DecompError> {
        let cx = build_complex(arr, l)?;
        Ok(verify_cone_deficits(&cx, deficits, tolerance))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        batch.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        batch.iter().map(run).collect()
    }
}

/// The area quadratic form Q over loop labels: area(l) = lᵀQl with
/// Q_xy = sin θ_xy on off-diagonal entries and zero diagonal.
#[derive(Debug, Clone)]
pub struct AreaForm {
    pub labels: Vec<String>,
    pub mat: Mat,
}

impl AreaForm {
    pub fn k(&self) -> usize {
        self.mat.n
    }

    pub fn entry(&self, x: usize, y: usize) -> f64 {
        self.mat[(x, y)]
    }

    /// lᵀQl.
    pub fn area(&self, l: &[f64]) -> f64 {
        self.bilinear(l, l)
    }

    /// lᵀQm.
    pub fn bilinear(&self, l: &[f64], m: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (x, lx) in l.iter().enumerate() {
            for (y, my) in m.iter().enumerate() {
                acc += lx * self.mat[(x, y)] * my;
            }
        }
        acc
    }
}

/// Computes the area form from bipartitions and deficits alone. This is an
/// independent route from summing developed quad areas: the entry for loops
/// x, y is sin(½ Σ_{n ∈ D} δ_n) where D is the set of pairs on which the two
/// sign vectors disagree.
pub fn area_form(arr: &LoopArrangement, deficits: &[f64]) -> Result<AreaForm, DecompError> {
    let report = validate(arr);
    if !report.is_valid() {
        return Err(DecompError::Arrangement(
            ArrangementError::DegenerateArrangement(format!(
                "{} violation(s)",
                report.violations.len()
            )),
        ));
    }
    let signs = arr.sign_vectors()?;
    let k = arr.n_loops();
    let mut mat = Mat::zeros(k);
    for x in 0..k {
        for y in (x + 1)..k {
            let mut d = 0.0;
            for pair in 0..arr.n_pairs() {
                if signs[x][pair] != signs[y][pair] {
                    d += deficits[pair];
                }
            }
            let q = (0.5 * d).sin();
            mat[(x, y)] = q;
            mat[(y, x)] = q;
        }
    }
    Ok(AreaForm {
        labels: arr.loop_labels(),
        mat,
    })
}

/// Eigenvalue signature (positives, negatives, zeros) with zero threshold
/// 1e−9 · max |eigenvalue|.
pub fn signature(q: &Mat) -> (usize, usize, usize) {
    let ev = jacobi_eigenvalues(q);
    let scale = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let eps = 1e-9 * scale;
    let mut pos = 0;
    let mut neg = 0;
    let mut zero = 0;
    for v in ev {
        if v > eps {
            pos += 1;
        } else if v < -eps {
            neg += 1;
        } else {
            zero += 1;
        }
    }
    (pos, neg, zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_of_zero_and_diag() {
        let z = Mat::zeros(5);
        assert_eq!(signature(&z), (0, 0, 5));
        let mut d = Mat::zeros(4);
        d[(0, 0)] = 1.0;
        d[(1, 1)] = -1.0;
        d[(2, 2)] = -1.0;
        d[(3, 3)] = -1.0;
        assert_eq!(signature(&d), (1, 3, 0));
    }
}
