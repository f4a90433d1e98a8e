//! Unfolding the parallelogram complex into the plane, local frames, frame
//! matrices, and the determinant-sign side-of-face test.
//!
//! A placement is a rigid motion applied to a quad's local coordinates.
//! Crossing a glued side determines the neighbor's placement: shared corners
//! coincide and headings oppose. Headings are analytic in the corner angles,
//! so placements stay well defined when sides collapse to length zero — which
//! is exactly the degeneration the side-of-face comparison probes.
//!
//! A frame spec lists dual paths between cone points. Entries are developed
//! sequentially: the first quad of the first path is pinned to the base
//! placement (first corner at the origin, first side along +x), and each
//! later path starts from a quad placed by an earlier one. Frame vectors are
//! endpoint differences of developed cone points; they are linear in the edge
//! lengths, and the matrix of that linear map is constant on the chart. Two
//! adjacent charts sharing a frame sit on different sides of their common
//! degeneration face exactly when the two determinants have opposite signs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arrangement::cells::FaceId;
use crate::arrangement::{are_adjacent, ArrangementError, LoopArrangement, SignedLabel};
use crate::decomposition::{
    build_complex, DecompError, EdgeLengths, ParallelogramComplex, QuadKey,
};
use crate::linalg::{Lu, Mat};

#[derive(Debug, Error, PartialEq)]
pub enum DevelopError {
    #[error("base quad has a zero-length side")]
    DegenerateBase,
    #[error("unknown quad {0:?}")]
    UnknownQuad(QuadKey),
    #[error("broken frame path: {0}")]
    BrokenPath(String),
    #[error("frame matrix is singular (|det| = {0:e})")]
    SingularFrame(f64),
    #[error("frame spec is not a frame: column for loop `{0}` is zero")]
    NotAFrame(String),
    #[error(transparent)]
    Decomposition(#[from] DecompError),
}

#[derive(Debug, Error, PartialEq)]
pub enum CompareError {
    #[error("arrangements are not adjacent across `{0}`")]
    NotAdjacent(String),
    #[error("shared frame mismatch in column `{label}` (max difference {diff:e})")]
    FrameMismatch { label: String, diff: f64 },
    #[error(transparent)]
    Develop(#[from] DevelopError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// Rigid motion x ↦ R(rot)·x + t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub rot: f64,
    pub t: [f64; 2],
}

impl Placement {
    pub fn identity() -> Self {
        Placement {
            rot: 0.0,
            t: [0.0, 0.0],
        }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.rot.sin_cos();
        [
            c * p[0] - s * p[1] + self.t[0],
            s * p[0] + c * p[1] + self.t[1],
        ]
    }
}

/// Spanning-tree layout order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreePolicy {
    BfsByQuadIndex,
    DfsByQuadIndex,
}

/// Planar layout of every quad along a spanning tree of the gluing graph.
#[derive(Debug, Clone)]
pub struct DevelopedComplex {
    pub base: usize,
    pub policy: TreePolicy,
    pub placements: Vec<Placement>,
    pub tree_parent: Vec<Option<usize>>,
}

impl DevelopedComplex {
    /// World corner positions of a quad.
    pub fn corners(&self, cx: &ParallelogramComplex, quad: usize) -> [[f64; 2]; 4] {
        let local = cx.quads[quad].local_corners();
        let p = &self.placements[quad];
        [
            p.apply(local[0]),
            p.apply(local[1]),
            p.apply(local[2]),
            p.apply(local[3]),
        ]
    }
}

/// Placement of the neighbor across side `slot` of `from`: shared corners
/// coincide, traversal directions oppose.
pub fn place_across(
    cx: &ParallelogramComplex,
    from: usize,
    slot: usize,
    placement: &Placement,
) -> (usize, usize, Placement) {
    let (to, to_slot) = cx.neighbor(from, slot);
    let fq = &cx.quads[from];
    let tq = &cx.quads[to];
    let rot =
        placement.rot + fq.local_heading(slot) + std::f64::consts::PI - tq.local_heading(to_slot);
    let anchor = placement.apply(fq.local_corners()[(slot + 1) % 4]);
    let local = tq.local_corners()[to_slot];
    let (s, c) = rot.sin_cos();
    let t = [
        anchor[0] - (c * local[0] - s * local[1]),
        anchor[1] - (s * local[0] + c * local[1]),
    ];
    (to, to_slot, Placement { rot, t })
}

/// Lays the complex out in the plane along a spanning tree from `base`.
///
/// The base quad is placed with its first corner at the origin and its
/// `key.i` side on the positive x-axis.
pub fn unfold(
    cx: &ParallelogramComplex,
    base: QuadKey,
    policy: TreePolicy,
) -> Result<DevelopedComplex, DevelopError> {
    let base_idx = cx.quad_id(base).ok_or(DevelopError::UnknownQuad(base))?;
    if cx.quads[base_idx].is_degenerate() {
        return Err(DevelopError::DegenerateBase);
    }
    let n = cx.quads.len();
    let mut placements = vec![Placement::identity(); n];
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[base_idx] = true;
    let mut frontier = vec![base_idx];
    while let Some(q) = match policy {
        TreePolicy::BfsByQuadIndex => {
            if frontier.is_empty() {
                None
            } else {
                Some(frontier.remove(0))
            }
        }
        TreePolicy::DfsByQuadIndex => frontier.pop(),
    } {
        for slot in 0..4 {
            let (to, _, placement) = place_across(cx, q, slot, &placements[q]);
            if !seen[to] {
                seen[to] = true;
                placements[to] = placement;
                parent[to] = Some(q);
                frontier.push(to);
            }
        }
    }
    Ok(DevelopedComplex {
        base: base_idx,
        policy,
        placements,
        tree_parent: parent,
    })
}

/// Net rotation of the closing map when developing the full fan of quads
/// around a cone point; modulo 2π this is the cone angle, so the holonomy
/// defect is the cone deficit.
pub fn develop_around_cone(cx: &ParallelogramComplex, cone: FaceId) -> f64 {
    let (q0, s0) = cx.cone_points[cone.0].corners[0];
    let mut q = q0;
    let mut slot = s0;
    let mut placement = Placement::identity();
    loop {
        let (to, to_slot, next) = place_across(cx, q, slot, &placement);
        // Crossing the side that leaves the cone corner lands on the
        // neighbor where the cone point sits one slot further.
        q = to;
        slot = (to_slot + 1) % 4;
        placement = next;
        if (q, slot) == (q0, s0) {
            break;
        }
    }
    placement.rot
}

/// A cone point referenced either by a labeled vertex or by a raw cell id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConePointRef {
    Labeled(SignedLabel),
    Cell(usize),
}

impl ConePointRef {
    pub fn resolve(&self, cx: &ParallelogramComplex) -> Result<FaceId, DevelopError> {
        match self {
            ConePointRef::Cell(fidx) => {
                if *fidx < cx.cells.faces.len() {
                    Ok(FaceId(*fidx))
                } else {
                    Err(DevelopError::BrokenPath(format!("no cell #{fidx}")))
                }
            }
            ConePointRef::Labeled(l) => cx
                .cells
                .face_of_vertex(&cx.arr, *l)
                .ok_or_else(|| DevelopError::BrokenPath(format!("vertex {l} is on a loop"))),
        }
    }
}

/// One frame edge: a dual path of adjacent quads from a corner instance of
/// `from` to one of `to`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameEdge {
    pub from: ConePointRef,
    pub to: ConePointRef,
    pub path: Vec<QuadKey>,
}

/// Ordered frame edges; N−1 of them coordinatize a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSpec {
    pub entries: Vec<FrameEdge>,
}

fn shared_slot(cx: &ParallelogramComplex, a: usize, b: usize) -> Option<usize> {
    (0..4).find(|slot| cx.neighbor(a, *slot).0 == b)
}

/// Develops the frame edges and returns the frame vectors Z.
///
/// The first path must start at `dev`'s base quad; every later path must
/// start at a quad placed by an earlier entry, and is developed from that
/// placement (re-developing across glued sides as it goes).
pub fn frame_vectors(
    cx: &ParallelogramComplex,
    dev: &DevelopedComplex,
    spec: &FrameSpec,
) -> Result<Vec<[f64; 2]>, DevelopError> {
    let mut state: BTreeMap<usize, Placement> = BTreeMap::new();
    state.insert(dev.base, dev.placements[dev.base]);
    frame_vectors_from_state(cx, spec, &mut state)
}

fn frame_vectors_from_state(
    cx: &ParallelogramComplex,
    spec: &FrameSpec,
    state: &mut BTreeMap<usize, Placement>,
) -> Result<Vec<[f64; 2]>, DevelopError> {
    let mut out = Vec::with_capacity(spec.entries.len());
    for (eidx, entry) in spec.entries.iter().enumerate() {
        if entry.path.is_empty() {
            // A trivial edge from a cone point to itself develops nowhere.
            if entry.from.resolve(cx)? == entry.to.resolve(cx)? {
                out.push([0.0, 0.0]);
                continue;
            }
            return Err(DevelopError::BrokenPath(format!("entry #{eidx} is empty")));
        }
        let ids: Vec<usize> = entry
            .path
            .iter()
            .map(|k| cx.quad_id(*k).ok_or(DevelopError::UnknownQuad(*k)))
            .collect::<Result<_, _>>()?;
        let mut placement = *state.get(&ids[0]).ok_or_else(|| {
            DevelopError::BrokenPath(format!(
                "entry #{eidx} starts at an unplaced quad {:?}",
                entry.path[0]
            ))
        })?;
        let from_face = entry.from.resolve(cx)?;
        let to_face = entry.to.resolve(cx)?;
        // The source cone point is measured at its first appearance along
        // the path, the target at its last.
        let mut start: Option<[f64; 2]> = None;
        let mut end: Option<[f64; 2]> = None;
        let measure = |q: usize,
                       placement: &Placement,
                       start: &mut Option<[f64; 2]>,
                       end: &mut Option<[f64; 2]>| {
            if start.is_none() {
                if let Some(slot) = cx.quads[q].corner_slot(from_face) {
                    *start = Some(placement.apply(cx.quads[q].local_corners()[slot]));
                }
            }
            if let Some(slot) = cx.quads[q].corner_slot(to_face) {
                *end = Some(placement.apply(cx.quads[q].local_corners()[slot]));
            }
        };
        state.insert(ids[0], placement);
        measure(ids[0], &placement, &mut start, &mut end);
        for w in ids.windows(2) {
            let slot = shared_slot(cx, w[0], w[1]).ok_or_else(|| {
                DevelopError::BrokenPath(format!(
                    "entry #{eidx}: consecutive path quads share no side"
                ))
            })?;
            let (_, _, next) = place_across(cx, w[0], slot, &placement);
            placement = next;
            state.insert(w[1], placement);
            measure(w[1], &placement, &mut start, &mut end);
        }
        let start = start.ok_or_else(|| {
            DevelopError::BrokenPath(format!(
                "entry #{eidx}: source cone point is not a corner along the path"
            ))
        })?;
        let end = end.ok_or_else(|| {
            DevelopError::BrokenPath(format!(
                "entry #{eidx}: target cone point is not a corner along the path"
            ))
        })?;
        out.push([end[0] - start[0], end[1] - start[1]]);
    }
    Ok(out)
}

/// The constant matrix M with Z(l) = M·l: rows are stacked x, y components
/// of the frame vectors, columns follow the arrangement's loop order.
#[derive(Debug, Clone)]
pub struct FrameMatrix {
    pub labels: Vec<String>,
    pub mat: Mat,
}

impl FrameMatrix {
    pub fn det(&self) -> f64 {
        Lu::factor(&self.mat).det()
    }

    /// ε_det = 1e−12 · ‖M‖_F^n, the determinant-scale singularity threshold.
    pub fn det_threshold(&self) -> f64 {
        let n = self.mat.n;
        let frob = self
            .mat
            .a
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
            .max(1e-6);
        1e-12 * frob.powi(n as i32)
    }
}

/// Evaluates the frame spec at unit length vectors to assemble M column by
/// column. The development is rooted at the canonical placement of the first
/// path quad, so the matrix is comparable across arrangements sharing that
/// quad's loop pair.
pub fn frame_matrix(
    arr: &LoopArrangement,
    deficits: &[f64],
    spec: &FrameSpec,
) -> Result<FrameMatrix, DevelopError> {
    let arr = arr.with_deficits(deficits.to_vec());
    let k = arr.n_loops();
    let rows = 2 * spec.entries.len();
    if rows != k {
        return Err(DevelopError::BrokenPath(format!(
            "frame has {} entries for {} loops; need k = 2·entries",
            spec.entries.len(),
            k
        )));
    }
    let first = *spec
        .entries
        .first()
        .ok_or_else(|| DevelopError::BrokenPath("empty frame spec".to_string()))?
        .path
        .first()
        .ok_or_else(|| DevelopError::BrokenPath("empty first path".to_string()))?;
    let mut mat = Mat::zeros(k);
    for col in 0..k {
        let mut l = vec![0.0; k];
        l[col] = 1.0;
        let cx = build_complex(&arr, &EdgeLengths(l))?;
        let base = cx.quad_id(first).ok_or(DevelopError::UnknownQuad(first))?;
        let mut state = BTreeMap::new();
        state.insert(base, Placement::identity());
        let z = frame_vectors_from_state(&cx, spec, &mut state)?;
        for (e, v) in z.iter().enumerate() {
            mat[(2 * e, col)] = v[0];
            mat[(2 * e + 1, col)] = v[1];
        }
    }
    // A frame must engage every loop: a zero column can never be inverted.
    for col in 0..k {
        let norm: f64 = (0..k).map(|r| mat[(r, col)].abs()).sum();
        if norm < 1e-14 {
            return Err(DevelopError::NotAFrame(arr.loops[col].label.clone()));
        }
    }
    Ok(FrameMatrix {
        labels: arr.loop_labels(),
        mat,
    })
}

/// Solves M·l = Z for the edge lengths.
pub fn coordinates_from_frame(m: &FrameMatrix, z: &[f64]) -> Result<EdgeLengths, DevelopError> {
    let lu = Lu::factor(&m.mat);
    let det = lu.det();
    if det.abs() <= m.det_threshold() {
        return Err(DevelopError::SingularFrame(det.abs()));
    }
    let x = lu.solve(z).ok_or(DevelopError::SingularFrame(det.abs()))?;
    Ok(EdgeLengths(x))
}

/// Verdict of the side-of-face comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideVerdict {
    SameSide,
    DifferentSide,
}

/// Decides whether two adjacent charts lie on the same or different sides of
/// their common degeneration face σ_x.
///
/// Both frame specs must describe the same frame extended through σ_x: all
/// columns except the changed loop's must agree to 1e−8. The verdict is
/// `DifferentSide` exactly when det M_A · det M_B < 0.
pub fn compare_face_sides(
    arr_a: &LoopArrangement,
    arr_b: &LoopArrangement,
    frame_a: &FrameSpec,
    frame_b: &FrameSpec,
    loop_label: &str,
) -> Result<SideVerdict, CompareError> {
    match are_adjacent(arr_a, arr_b)? {
        Some(l) if l == loop_label => {}
        _ => return Err(CompareError::NotAdjacent(loop_label.to_string())),
    }
    let ma = frame_matrix(arr_a, &arr_a.deficits, frame_a)?;
    let mb = frame_matrix(arr_b, &arr_b.deficits, frame_b)?;
    let x = arr_a
        .loop_index(loop_label)
        .map_err(CompareError::Arrangement)?;
    let k = ma.mat.n;
    for col in 0..k {
        if col == x {
            continue;
        }
        let mut diff = 0.0f64;
        for row in 0..k {
            diff = diff.max((ma.mat[(row, col)] - mb.mat[(row, col)]).abs());
        }
        if diff > 1e-8 {
            return Err(CompareError::FrameMismatch {
                label: ma.labels[col].clone(),
                diff,
            });
        }
    }
    let da = ma.det();
    let db = mb.det();
    if da.abs() <= ma.det_threshold() {
        return Err(CompareError::Develop(DevelopError::SingularFrame(da.abs())));
    }
    if db.abs() <= mb.det_threshold() {
        return Err(CompareError::Develop(DevelopError::SingularFrame(db.abs())));
    }
    Ok(if da * db < 0.0 {
        SideVerdict::DifferentSide
    } else {
        SideVerdict::SameSide
    })
}
