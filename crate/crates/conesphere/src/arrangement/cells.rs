//! The cell complex a valid arrangement cuts out of the sphere.
//!
//! For k loops in general position: V = k(k−1) intersection points,
//! E = 2k(k−1) arcs, F = k² − k + 2 convex spherical cells, so V − E + F = 2.
//! Cells are identified with their sign vectors (the side of every loop),
//! which makes face lookup, lune membership, and the antipodal involution
//! sign flips rather than geometry.

use std::collections::BTreeMap;

use crate::arrangement::{validate, ArrangementError, LoopArrangement, SignedLabel};
use crate::geom::{normalize3, tangent_angle, tangent_basis, UnitVec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId(pub usize);

/// Intersection point of two loops. The pair `(i, j)` is stored with i < j;
/// `sign` distinguishes the two antipodal points: +1 is the representative in
/// direction `normalize(n_i × n_j)`.
#[derive(Debug, Clone)]
pub struct IntersectionPoint {
    pub loops: (usize, usize),
    pub sign: i8,
    pub pos: UnitVec3,
}

/// Maximal piece of a loop between consecutive intersection points.
#[derive(Debug, Clone)]
pub struct Arc {
    pub lp: usize,
    pub ends: [PointId; 2],
    pub mid: UnitVec3,
}

/// Convex spherical cell.
#[derive(Debug, Clone)]
pub struct Face {
    /// Side of every loop: `signs[l]` is the sign of `n_l · x` on the cell.
    pub signs: Vec<i8>,
    /// Interior point (normalized average of the boundary vertices).
    pub witness: UnitVec3,
    /// Boundary intersection points in counterclockwise order (seen from
    /// outside the sphere).
    pub cycle: Vec<PointId>,
    /// `cycle_arcs[t]` joins `cycle[t]` to `cycle[(t+1) % len]`.
    pub cycle_arcs: Vec<ArcId>,
    /// Labeled vertices strictly inside the cell.
    pub enclosed: Vec<SignedLabel>,
}

#[derive(Debug, Clone)]
pub struct CellComplex {
    pub points: Vec<IntersectionPoint>,
    pub arcs: Vec<Arc>,
    pub faces: Vec<Face>,
    /// For each point, the four incident faces in counterclockwise order.
    pub corner_faces: Vec<[FaceId; 4]>,
    /// For each point, quadrant signs (s_i, s_j) of `corner_faces` entries.
    pub corner_quadrants: Vec<[(i8, i8); 4]>,
    point_index: BTreeMap<(usize, usize, i8), PointId>,
    face_index: BTreeMap<Vec<i8>, FaceId>,
}

impl CellComplex {
    pub fn point_id(&self, i: usize, j: usize, sign: i8) -> Option<PointId> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.point_index.get(&(a, b, sign)).copied()
    }

    pub fn face_by_signs(&self, signs: &[i8]) -> Option<FaceId> {
        self.face_index.get(signs).copied()
    }

    /// Cell containing `p`, or None when `p` lies on a loop.
    pub fn face_containing(&self, arr: &LoopArrangement, p: &UnitVec3) -> Option<FaceId> {
        let mut signs = Vec::with_capacity(arr.n_loops());
        for l in &arr.loops {
            let d = l.normal.dot(p);
            if d == 0.0 {
                return None;
            }
            signs.push(if d > 0.0 { 1 } else { -1 });
        }
        self.face_by_signs(&signs)
    }

    /// Cell containing the labeled vertex.
    pub fn face_of_vertex(&self, arr: &LoopArrangement, v: SignedLabel) -> Option<FaceId> {
        self.face_containing(arr, &arr.vertices.vertex(v))
    }

    pub fn antipodal_point(&self, p: PointId) -> PointId {
        let pt = &self.points[p.0];
        self.point_id(pt.loops.0, pt.loops.1, -pt.sign).unwrap()
    }

    pub fn antipodal_face(&self, f: FaceId) -> FaceId {
        let negated: Vec<i8> = self.faces[f.0].signs.iter().map(|s| -s).collect();
        self.face_by_signs(&negated).unwrap()
    }

    /// The arc of `lp_x` incident to point `p` whose midpoint lies on side
    /// `side_y` of loop `lp_y` (the other loop through `p`).
    pub fn arc_at(
        &self,
        arr: &LoopArrangement,
        p: PointId,
        lp_x: usize,
        lp_y: usize,
        side_y: i8,
    ) -> Option<ArcId> {
        let ny = &arr.loops[lp_y].normal;
        (0..self.arcs.len()).map(ArcId).find(|a| {
            let arc = &self.arcs[a.0];
            arc.lp == lp_x && arc.ends.contains(&p) && (ny.dot(&arc.mid) > 0.0) == (side_y > 0)
        })
    }

    /// The two faces adjacent along an arc, as (outside, inside) of the
    /// arc's loop.
    pub fn arc_faces(&self, arr: &LoopArrangement, a: ArcId) -> (FaceId, FaceId) {
        let arc = &self.arcs[a.0];
        let mut signs: Vec<i8> = arr
            .loops
            .iter()
            .map(|l| if l.normal.dot(&arc.mid) > 0.0 { 1 } else { -1 })
            .collect();
        signs[arc.lp] = 1;
        let out = self.face_by_signs(&signs).expect("arc outside face");
        signs[arc.lp] = -1;
        let ins = self.face_by_signs(&signs).expect("arc inside face");
        (out, ins)
    }
}

/// Builds the cell complex of a valid arrangement.
pub fn cell_complex(arr: &LoopArrangement) -> Result<CellComplex, ArrangementError> {
    let report = validate(arr);
    if !report.is_valid() {
        return Err(ArrangementError::DegenerateArrangement(format!(
            "{} violation(s), first: {}",
            report.violations.len(),
            report.violations[0]
        )));
    }
    let k = arr.n_loops();
    if k < 3 {
        return Err(ArrangementError::DegenerateArrangement(
            "cell complex needs at least 3 loops".to_string(),
        ));
    }

    // Intersection points.
    let mut points = Vec::new();
    let mut point_index = BTreeMap::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let c = arr.loops[i].normal.cross(&arr.loops[j].normal);
            let pos = normalize3(c).map_err(|_| {
                ArrangementError::DegenerateArrangement(format!("loops #{i} and #{j} are parallel"))
            })?;
            for sign in [1i8, -1i8] {
                let id = PointId(points.len());
                points.push(IntersectionPoint {
                    loops: (i, j),
                    sign,
                    pos: if sign > 0 { pos } else { pos.antipode() },
                });
                point_index.insert((i, j, sign), id);
            }
        }
    }

    // Arcs: sort the points of each loop by angle around it.
    let mut arcs = Vec::new();
    for lp in 0..k {
        let n = &arr.loops[lp].normal;
        let basis = tangent_basis(n);
        let mut on_loop: Vec<(f64, PointId)> = points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.loops.0 == lp || p.loops.1 == lp)
            .map(|(idx, p)| (tangent_angle(&basis, p.pos.as_array()), PointId(idx)))
            .collect();
        on_loop.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let m = on_loop.len();
        for t in 0..m {
            let (a0, p0) = on_loop[t];
            let (a1, p1) = on_loop[(t + 1) % m];
            let gap = if t + 1 == m {
                a1 + std::f64::consts::TAU - a0
            } else {
                a1 - a0
            };
            let amid = a0 + gap / 2.0;
            let mid = UnitVec3::normalized(
                amid.cos() * basis.0[0] + amid.sin() * basis.1[0],
                amid.cos() * basis.0[1] + amid.sin() * basis.1[1],
                amid.cos() * basis.0[2] + amid.sin() * basis.1[2],
            )
            .expect("arc midpoint");
            arcs.push(Arc {
                lp,
                ends: [p0, p1],
                mid,
            });
        }
    }

    // Faces: every cell touches an intersection point, so the four quadrant
    // sign vectors at every point enumerate all cells.
    let mut face_index: BTreeMap<Vec<i8>, FaceId> = BTreeMap::new();
    let mut face_signs: Vec<Vec<i8>> = Vec::new();
    let mut corner_faces: Vec<[FaceId; 4]> = Vec::with_capacity(points.len());
    let mut corner_quadrants: Vec<[(i8, i8); 4]> = Vec::with_capacity(points.len());
    for pt in &points {
        let (i, j) = pt.loops;
        let ambient: Vec<i8> = arr
            .loops
            .iter()
            .map(|l| if l.normal.dot(&pt.pos) > 0.0 { 1 } else { -1 })
            .collect();
        // Quadrant bisector s·n_i + t·n_j is tangent at the point and lies in
        // quadrant (s, t); its angle orders the corners counterclockwise.
        let basis = tangent_basis(&pt.pos);
        let ni = arr.loops[i].normal.as_array();
        let nj = arr.loops[j].normal.as_array();
        let mut quads: Vec<(f64, (i8, i8))> = [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)]
            .iter()
            .map(|&(s, t)| {
                let b = [
                    s as f64 * ni[0] + t as f64 * nj[0],
                    s as f64 * ni[1] + t as f64 * nj[1],
                    s as f64 * ni[2] + t as f64 * nj[2],
                ];
                (tangent_angle(&basis, b), (s, t))
            })
            .collect();
        quads.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut faces_here = [FaceId(0); 4];
        let mut quadrants_here = [(0i8, 0i8); 4];
        for (slot, (_, (s, t))) in quads.iter().enumerate() {
            let mut signs = ambient.clone();
            signs[i] = *s;
            signs[j] = *t;
            let id = *face_index.entry(signs.clone()).or_insert_with(|| {
                let id = FaceId(face_signs.len());
                face_signs.push(signs.clone());
                id
            });
            faces_here[slot] = id;
            quadrants_here[slot] = (*s, *t);
        }
        corner_faces.push(faces_here);
        corner_quadrants.push(quadrants_here);
    }

    let expected_v = k * (k - 1);
    let expected_e = 2 * k * (k - 1);
    let expected_f = k * k - k + 2;
    if points.len() != expected_v || arcs.len() != expected_e || face_signs.len() != expected_f {
        return Err(ArrangementError::DegenerateArrangement(format!(
            "cell counts V={} E={} F={}, expected V={expected_v} E={expected_e} F={expected_f}",
            points.len(),
            arcs.len(),
            face_signs.len()
        )));
    }

    // Assemble faces: incident points, boundary cycles, witnesses, labels.
    let mut incident_points: Vec<Vec<PointId>> = vec![Vec::new(); face_signs.len()];
    for (pid, faces_here) in corner_faces.iter().enumerate() {
        for f in faces_here {
            if !incident_points[f.0].contains(&PointId(pid)) {
                incident_points[f.0].push(PointId(pid));
            }
        }
    }
    let mut incident_arcs: Vec<Vec<ArcId>> = vec![Vec::new(); face_signs.len()];
    for (aid, arc) in arcs.iter().enumerate() {
        let mut signs: Vec<i8> = arr
            .loops
            .iter()
            .map(|l| if l.normal.dot(&arc.mid) > 0.0 { 1 } else { -1 })
            .collect();
        for s in [1i8, -1i8] {
            signs[arc.lp] = s;
            let f = face_index.get(&signs).ok_or_else(|| {
                ArrangementError::DegenerateArrangement(format!(
                    "arc #{aid} borders an unknown cell"
                ))
            })?;
            incident_arcs[f.0].push(ArcId(aid));
        }
    }

    let vertex_signs: Vec<Vec<i8>> = arr
        .sign_vectors()
        .map_err(|e| ArrangementError::DegenerateArrangement(format!("vertex on loop: {e}")))?;
    // Transpose: per pair, the sign of each loop at i⁺.
    let label_signs: Vec<Vec<i8>> = (0..arr.n_pairs())
        .map(|pair| (0..k).map(|l| vertex_signs[l][pair]).collect())
        .collect();

    let mut faces = Vec::with_capacity(face_signs.len());
    for (fidx, signs) in face_signs.iter().enumerate() {
        let pts = &incident_points[fidx];
        let mut acc = [0.0f64; 3];
        for p in pts {
            let a = points[p.0].pos.as_array();
            acc[0] += a[0];
            acc[1] += a[1];
            acc[2] += a[2];
        }
        let witness = normalize3(acc).map_err(|_| {
            ArrangementError::DegenerateArrangement(format!(
                "cell #{fidx} has a degenerate witness"
            ))
        })?;
        let basis = tangent_basis(&witness);
        let mut cycle: Vec<PointId> = pts.clone();
        cycle.sort_by(|a, b| {
            let pa = points[a.0].pos.as_array();
            let pb = points[b.0].pos.as_array();
            let aa = tangent_angle(&basis, pa);
            let ab = tangent_angle(&basis, pb);
            aa.partial_cmp(&ab).unwrap()
        });
        // Join consecutive boundary points with their shared arc.
        let mut arc_of_pair: BTreeMap<(PointId, PointId), ArcId> = BTreeMap::new();
        for a in &incident_arcs[fidx] {
            let e = arcs[a.0].ends;
            let key = if e[0] < e[1] {
                (e[0], e[1])
            } else {
                (e[1], e[0])
            };
            arc_of_pair.insert(key, *a);
        }
        let mut cycle_arcs = Vec::with_capacity(cycle.len());
        for t in 0..cycle.len() {
            let a = cycle[t];
            let b = cycle[(t + 1) % cycle.len()];
            let key = if a < b { (a, b) } else { (b, a) };
            let arc = arc_of_pair.get(&key).ok_or_else(|| {
                ArrangementError::DegenerateArrangement(format!(
                    "cell #{fidx}: consecutive boundary points share no arc"
                ))
            })?;
            cycle_arcs.push(*arc);
        }
        let mut enclosed = Vec::new();
        for (pair, ls) in label_signs.iter().enumerate() {
            if ls == signs {
                enclosed.push(SignedLabel::plus(pair));
            } else if ls.iter().zip(signs).all(|(a, b)| *a == -*b) {
                enclosed.push(SignedLabel::minus(pair));
            }
        }
        faces.push(Face {
            signs: signs.clone(),
            witness,
            cycle,
            cycle_arcs,
            enclosed,
        });
    }

    Ok(CellComplex {
        points,
        arcs,
        faces,
        corner_faces,
        corner_quadrants,
        point_index,
        face_index,
    })
}
