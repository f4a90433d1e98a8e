//! Loop arrangements on the labeled sphere.
//!
//! A labeled sphere carries N antipodal vertex pairs i⁺/i⁻ and N positive
//! cone-deficits summing to 2π. A loop is an oriented great circle avoiding
//! every labeled vertex; its homotopy class relative to the vertices is the
//! bipartition it induces on the 2N labels. Because the loop is a great
//! circle, exactly one of i⁺, i⁻ lies on each side, so the bipartition is
//! captured by a sign vector in {±1}^N (the side of i⁺ per pair), and the
//! unoriented class is that vector up to global negation.
//!
//! An arrangement is a set of pairwise non-homotopic loops, no three
//! concurrent. Everything downstream (lunes, cell complexes, parallelogram
//! angles) reduces to these sign vectors plus the actual normals.

pub mod cells;
pub mod search;

use std::fmt;

use thiserror::Error;

use crate::geom::{triple, UnitVec3, EPS_CONCUR, EPS_DISTINCT, EPS_VERTEX};

/// One of the 2N labeled vertices: pair index (0-based) plus a sign.
/// Displays in superscript-style notation, e.g. `2+` for the positive vertex of
/// pair 2 (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedLabel {
    pub pair: usize,
    pub positive: bool,
}

impl SignedLabel {
    pub fn plus(pair: usize) -> Self {
        SignedLabel {
            pair,
            positive: true,
        }
    }

    pub fn minus(pair: usize) -> Self {
        SignedLabel {
            pair,
            positive: false,
        }
    }

    pub fn antipode(&self) -> Self {
        SignedLabel {
            pair: self.pair,
            positive: !self.positive,
        }
    }

    /// Parses `"2+"` / `"2-"` (1-based pair index).
    pub fn parse(s: &str) -> Option<Self> {
        let (num, sign) = s.split_at(s.len().checked_sub(1)?);
        let pair: usize = num.parse().ok()?;
        if pair == 0 {
            return None;
        }
        match sign {
            "+" => Some(SignedLabel::plus(pair - 1)),
            "-" => Some(SignedLabel::minus(pair - 1)),
            _ => None,
        }
    }
}

impl fmt::Display for SignedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            self.pair + 1,
            if self.positive { "+" } else { "-" }
        )
    }
}

/// Positions of the N positive vertices; i⁻ is implicitly the antipode.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledVertexSet {
    positions: Vec<UnitVec3>,
}

impl LabeledVertexSet {
    pub fn new(positions: Vec<UnitVec3>) -> Self {
        LabeledVertexSet { positions }
    }

    pub fn n_pairs(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[UnitVec3] {
        &self.positions
    }

    /// Position of a signed vertex.
    pub fn vertex(&self, l: SignedLabel) -> UnitVec3 {
        let p = self.positions[l.pair];
        if l.positive {
            p
        } else {
            p.antipode()
        }
    }

    /// Minimum pairwise angle over all 2N implied points.
    pub fn min_pairwise_angle(&self) -> f64 {
        let mut pts: Vec<UnitVec3> = Vec::with_capacity(2 * self.positions.len());
        for p in &self.positions {
            pts.push(*p);
            pts.push(p.antipode());
        }
        let mut best = std::f64::consts::PI;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                best = best.min(pts[i].angle_to(&pts[j]));
            }
        }
        best
    }
}

/// An oriented loop: a great circle with a chosen outside, stored as the unit
/// normal pointing toward that outside.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedLoop {
    pub label: String,
    pub normal: UnitVec3,
}

/// Side of an oriented loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Outside,
    Inside,
}

impl Side {
    pub fn sign(&self) -> i8 {
        match self {
            Side::Outside => 1,
            Side::Inside => -1,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ArrangementError {
    #[error("point lies on loop `{0}` (|n·p| = {1:e})")]
    OnLoop(String, f64),
    #[error("arrangements are incompatible: {0}")]
    IncompatibleArrangements(String),
    #[error("arrangement is degenerate: {0}")]
    DegenerateArrangement(String),
    #[error("unknown loop label `{0}`")]
    UnknownLoop(String),
}

/// Which side of `lp` the point `p` lies on: +1 outside, −1 inside.
pub fn loop_side(lp: &OrientedLoop, p: &UnitVec3) -> Result<Side, ArrangementError> {
    let d = lp.normal.dot(p);
    if d.abs() <= EPS_VERTEX {
        return Err(ArrangementError::OnLoop(lp.label.clone(), d.abs()));
    }
    Ok(if d > 0.0 { Side::Outside } else { Side::Inside })
}

/// Oriented sign vector of a loop: entry i is the side of vertex i⁺.
pub fn sign_vector(lp: &OrientedLoop, vs: &LabeledVertexSet) -> Result<Vec<i8>, ArrangementError> {
    vs.positions()
        .iter()
        .map(|v| loop_side(lp, v).map(|s| s.sign()))
        .collect()
}

/// Unordered vertex bipartition induced by a loop: the sign vector up to
/// global negation, canonicalized so the first entry is +1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bipartition(Vec<i8>);

impl Bipartition {
    pub fn from_signs(mut signs: Vec<i8>) -> Self {
        if signs.first().copied() == Some(-1) {
            for s in &mut signs {
                *s = -*s;
            }
        }
        Bipartition(signs)
    }

    /// Builds the class whose canonical `+` side is exactly `plus_set`
    /// (0-based pair indices); the set is normalized to contain pair 0.
    pub fn from_plus_set(n_pairs: usize, plus_set: &[usize]) -> Self {
        let mut signs = vec![-1i8; n_pairs];
        for &i in plus_set {
            signs[i] = 1;
        }
        Bipartition::from_signs(signs)
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    /// The two sides as signed-label sets; `sides().0` is the canonical `+`
    /// side.
    pub fn sides(&self) -> (Vec<SignedLabel>, Vec<SignedLabel>) {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (i, s) in self.0.iter().enumerate() {
            if *s > 0 {
                plus.push(SignedLabel::plus(i));
                minus.push(SignedLabel::minus(i));
            } else {
                plus.push(SignedLabel::minus(i));
                minus.push(SignedLabel::plus(i));
            }
        }
        (plus, minus)
    }

    /// Pairs on which the two classes disagree.
    pub fn disagreement(&self, other: &Bipartition) -> Vec<usize> {
        let d: Vec<usize> = self
            .0
            .iter()
            .zip(&other.0)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect();
        d
    }
}

/// Unordered bipartition of the 2N labels induced by a loop.
pub fn vertex_partition(
    lp: &OrientedLoop,
    vs: &LabeledVertexSet,
) -> Result<Bipartition, ArrangementError> {
    Ok(Bipartition::from_signs(sign_vector(lp, vs)?))
}

/// A loop arrangement: labeled antipodal vertices, deficits, and oriented
/// loops.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopArrangement {
    pub vertices: LabeledVertexSet,
    pub loops: Vec<OrientedLoop>,
    pub deficits: Vec<f64>,
}

impl LoopArrangement {
    pub fn n_pairs(&self) -> usize {
        self.vertices.n_pairs()
    }

    pub fn n_loops(&self) -> usize {
        self.loops.len()
    }

    pub fn loop_index(&self, label: &str) -> Result<usize, ArrangementError> {
        self.loops
            .iter()
            .position(|l| l.label == label)
            .ok_or_else(|| ArrangementError::UnknownLoop(label.to_string()))
    }

    pub fn loop_labels(&self) -> Vec<String> {
        self.loops.iter().map(|l| l.label.clone()).collect()
    }

    /// Oriented sign vectors for all loops; errors if any loop touches a
    /// vertex.
    pub fn sign_vectors(&self) -> Result<Vec<Vec<i8>>, ArrangementError> {
        self.loops
            .iter()
            .map(|l| sign_vector(l, &self.vertices))
            .collect()
    }

    pub fn bipartitions(&self) -> Result<Vec<Bipartition>, ArrangementError> {
        self.loops
            .iter()
            .map(|l| vertex_partition(l, &self.vertices))
            .collect()
    }

    pub fn with_deficits(&self, deficits: Vec<f64>) -> LoopArrangement {
        LoopArrangement {
            vertices: self.vertices.clone(),
            loops: self.loops.clone(),
            deficits,
        }
    }
}

/// One violated invariant, with offending indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonUnitNormal {
        lp: usize,
    },
    NonUnitVertex {
        pair: usize,
    },
    DeficitCount {
        expected: usize,
        got: usize,
    },
    NonPositiveDeficit {
        pair: usize,
        value: f64,
    },
    DeficitSum {
        sum: f64,
    },
    VerticesTooClose {
        min_angle: f64,
    },
    VertexOnLoop {
        lp: usize,
        vertex: SignedLabel,
        dot: f64,
    },
    HomotopicPair {
        lp_a: usize,
        lp_b: usize,
    },
    ConcurrentTriple {
        lps: [usize; 3],
        det: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonUnitNormal { lp } => write!(f, "loop #{lp} normal is not unit"),
            Violation::NonUnitVertex { pair } => write!(f, "vertex {} is not unit", pair + 1),
            Violation::DeficitCount { expected, got } => {
                write!(f, "expected {expected} deficits, got {got}")
            }
            Violation::NonPositiveDeficit { pair, value } => {
                write!(f, "deficit {} is not positive ({value})", pair + 1)
            }
            Violation::DeficitSum { sum } => write!(f, "deficits sum to {sum}, not 2π"),
            Violation::VerticesTooClose { min_angle } => {
                write!(f, "labeled points too close (min angle {min_angle:e})")
            }
            Violation::VertexOnLoop { lp, vertex, dot } => {
                write!(f, "vertex {vertex} lies on loop #{lp} (|n·v| = {dot:e})")
            }
            Violation::HomotopicPair { lp_a, lp_b } => {
                write!(f, "loops #{lp_a} and #{lp_b} induce the same bipartition")
            }
            Violation::ConcurrentTriple { lps, det } => write!(
                f,
                "loops #{} #{} #{} are concurrent (|det| = {det:e})",
                lps[0], lps[1], lps[2]
            ),
        }
    }
}

/// Result of validating an arrangement. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every `LoopArrangement` invariant and reports all violations.
pub fn validate(arr: &LoopArrangement) -> ValidationReport {
    let mut v = Vec::new();
    let n = arr.n_pairs();

    for (i, p) in arr.vertices.positions().iter().enumerate() {
        let n2 = p.dot(p);
        if (n2 - 1.0).abs() > 1e-12 {
            v.push(Violation::NonUnitVertex { pair: i });
        }
    }
    for (i, l) in arr.loops.iter().enumerate() {
        let n2 = l.normal.dot(&l.normal);
        if (n2 - 1.0).abs() > 1e-12 {
            v.push(Violation::NonUnitNormal { lp: i });
        }
    }

    if arr.deficits.len() != n {
        v.push(Violation::DeficitCount {
            expected: n,
            got: arr.deficits.len(),
        });
    } else {
        for (i, d) in arr.deficits.iter().enumerate() {
            if *d <= 0.0 {
                v.push(Violation::NonPositiveDeficit { pair: i, value: *d });
            }
        }
        let sum: f64 = arr.deficits.iter().sum();
        if (sum - std::f64::consts::TAU).abs() > 1e-10 {
            v.push(Violation::DeficitSum { sum });
        }
    }

    let min_angle = arr.vertices.min_pairwise_angle();
    if min_angle <= EPS_DISTINCT {
        v.push(Violation::VerticesTooClose { min_angle });
    }

    for (li, l) in arr.loops.iter().enumerate() {
        for pair in 0..n {
            let d = l.normal.dot(&arr.vertices.positions()[pair]).abs();
            if d <= EPS_VERTEX {
                v.push(Violation::VertexOnLoop {
                    lp: li,
                    vertex: SignedLabel::plus(pair),
                    dot: d,
                });
            }
        }
    }

    // Homotopy classes are bipartitions; compare them pairwise. Skip loops
    // already known to pass through a vertex (their partition is undefined).
    let parts: Vec<Option<Bipartition>> = arr
        .loops
        .iter()
        .map(|l| vertex_partition(l, &arr.vertices).ok())
        .collect();
    for i in 0..arr.loops.len() {
        for j in (i + 1)..arr.loops.len() {
            if let (Some(a), Some(b)) = (&parts[i], &parts[j]) {
                if a == b {
                    v.push(Violation::HomotopicPair { lp_a: i, lp_b: j });
                }
            }
        }
    }

    for i in 0..arr.loops.len() {
        for j in (i + 1)..arr.loops.len() {
            for k in (j + 1)..arr.loops.len() {
                let d = triple(
                    &arr.loops[i].normal,
                    &arr.loops[j].normal,
                    &arr.loops[k].normal,
                )
                .abs();
                if d <= EPS_CONCUR {
                    v.push(Violation::ConcurrentTriple {
                        lps: [i, j, k],
                        det: d,
                    });
                }
            }
        }
    }

    ValidationReport { violations: v }
}

/// Labels enclosed by the lune of loops `i`, `j` that contains `witness`.
///
/// The four lunes of a loop pair partition all 2N labeled points; each label
/// contributes at most one representative to a given lune, so the result is
/// reported as signed labels.
pub fn lune_vertices(
    arr: &LoopArrangement,
    lp_i: usize,
    lp_j: usize,
    witness: &UnitVec3,
) -> Result<Vec<SignedLabel>, ArrangementError> {
    assert_ne!(lp_i, lp_j, "lune requires two distinct loops");
    let si = loop_side(&arr.loops[lp_i], witness)?.sign();
    let sj = loop_side(&arr.loops[lp_j], witness)?.sign();
    let vi = sign_vector(&arr.loops[lp_i], &arr.vertices)?;
    let vj = sign_vector(&arr.loops[lp_j], &arr.vertices)?;
    let mut out = Vec::new();
    for pair in 0..arr.n_pairs() {
        if vi[pair] == si && vj[pair] == sj {
            out.push(SignedLabel::plus(pair));
        } else if vi[pair] == -si && vj[pair] == -sj {
            out.push(SignedLabel::minus(pair));
        }
    }
    Ok(out)
}

/// Sum of deficits enclosed by the lune of loops `i`, `j` containing
/// `witness`.
pub fn lune_deficit_sum(
    arr: &LoopArrangement,
    lp_i: usize,
    lp_j: usize,
    witness: &UnitVec3,
) -> Result<f64, ArrangementError> {
    Ok(lune_vertices(arr, lp_i, lp_j, witness)?
        .iter()
        .map(|l| arr.deficits[l.pair])
        .sum())
}

/// Tests whether two arrangements are adjacent: same labeled sphere, same
/// loop labels, and bipartitions differing on exactly one loop. Returns that
/// loop's label, or None when zero or more than one differ.
///
/// Vertex positions are allowed to differ: adjacency is a statement about
/// homotopy classes, and realizing both charts of an adjacent pair on one
/// vertex configuration is not always possible. Pair count, deficits, and loop labels must match.
pub fn are_adjacent(
    a: &LoopArrangement,
    b: &LoopArrangement,
) -> Result<Option<String>, ArrangementError> {
    if a.n_pairs() != b.n_pairs() {
        return Err(ArrangementError::IncompatibleArrangements(format!(
            "vertex pair counts differ: {} vs {}",
            a.n_pairs(),
            b.n_pairs()
        )));
    }
    if a.deficits.len() != b.deficits.len()
        || a.deficits
            .iter()
            .zip(&b.deficits)
            .any(|(x, y)| (x - y).abs() > 1e-12)
    {
        return Err(ArrangementError::IncompatibleArrangements(
            "deficits differ".to_string(),
        ));
    }
    if a.loop_labels() != b.loop_labels() {
        return Err(ArrangementError::IncompatibleArrangements(
            "loop labels differ".to_string(),
        ));
    }
    let pa = a.bipartitions()?;
    let pb = b.bipartitions()?;
    let mut differing = Vec::new();
    for (idx, (x, y)) in pa.iter().zip(&pb).enumerate() {
        if x != y {
            differing.push(idx);
        }
    }
    Ok(match differing.as_slice() {
        [only] => Some(a.loops[*only].label.clone()),
        _ => None,
    })
}

/// Canonical encoding of an arrangement's combinatorics: the bipartition
/// matrix minimized over loop order, per-loop orientation flips, vertex-label
/// permutations, and per-pair antipodal swaps. Two arrangements are
/// combinatorially equivalent exactly when their signatures agree.
///
/// The search over label permutations is exponential in N; fine for N ≤ 5.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CombinatorialSignature(Vec<Vec<i8>>);

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    permute_rec(&mut idx, 0, &mut out);
    out
}

fn permute_rec(idx: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == idx.len() {
        out.push(idx.clone());
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute_rec(idx, k + 1, out);
        idx.swap(k, i);
    }
}

pub fn combinatorial_signature(
    arr: &LoopArrangement,
) -> Result<CombinatorialSignature, ArrangementError> {
    let signs = arr.sign_vectors()?;
    Ok(signature_of_sign_vectors(&signs))
}

pub(crate) fn signature_of_sign_vectors(signs: &[Vec<i8>]) -> CombinatorialSignature {
    let n = signs.first().map(|s| s.len()).unwrap_or(0);
    let perms = permutations(n);
    let mut best: Option<Vec<Vec<i8>>> = None;
    for perm in &perms {
        for flips in 0u32..(1 << n) {
            let mut rows: Vec<Vec<i8>> = signs
                .iter()
                .map(|row| {
                    let mut r: Vec<i8> = (0..n)
                        .map(|t| {
                            let src = perm[t];
                            let mut s = row[src];
                            if flips & (1 << t) != 0 {
                                s = -s;
                            }
                            s
                        })
                        .collect();
                    // Per-loop orientation is free: canonicalize each row.
                    if r.first().copied() == Some(-1) {
                        for x in &mut r {
                            *x = -*x;
                        }
                    }
                    r
                })
                .collect();
            rows.sort();
            match &best {
                Some(b) if *b <= rows => {}
                _ => best = Some(rows),
            }
        }
    }
    CombinatorialSignature(best.unwrap_or_default())
}
