//! The hyperbolic structure on the unit-area slice.
//!
//! The area form Q has signature (1, 2N−3), so the unit-area locus inside the
//! positive cone is a sheet of the hyperboloid ⟨l, Ql⟩ = 1 and inherits the
//! hyperbolic metric d(x, y) = arccosh(xᵀQy). No model conversion: Q itself
//! is the Minkowski form.
//!
//! The closure of the chart is an ideal simplex: the coordinate axes are
//! Q-null (zero diagonal), the k coordinate hyperplanes are totally geodesic
//! facets, and the chart's symmetry on six loops is the dihedral action of
//! the unlabeled quotient.

use thiserror::Error;

use crate::decomposition::{signature, AreaForm};
use crate::linalg::{fit_pairwise_sum, Mat};

#[derive(Debug, Error, PartialEq)]
pub enum ModuliError {
    #[error("length vector has non-positive area {0:e}")]
    NonPositiveArea(f64),
    #[error("points reference different area forms")]
    IncompatibleForms,
    #[error("form has signature ({0}, {1}, {2}), expected (1, k-1, 0)")]
    WrongSignature(usize, usize, usize),
    #[error("operation requires the 6-loop chart, got k = {0}")]
    WrongChart(usize),
    #[error("length vector must be nonnegative")]
    NegativeLength,
    #[error("bilinear value {0} is below the hyperboloid sheet")]
    OutsideChart(f64),
}

/// A unit-area point of the chart: l ≥ 0 with lᵀQl = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuliPoint {
    pub lengths: Vec<f64>,
    pub labels: Vec<String>,
}

/// Rescales a nonnegative length vector onto the unit-area slice.
pub fn normalize(lengths: &[f64], q: &AreaForm) -> Result<ModuliPoint, ModuliError> {
    if lengths.iter().any(|v| *v < 0.0) {
        return Err(ModuliError::NegativeLength);
    }
    let a = q.area(lengths);
    if a <= 0.0 {
        return Err(ModuliError::NonPositiveArea(a));
    }
    let s = a.sqrt();
    Ok(ModuliPoint {
        lengths: lengths.iter().map(|v| v / s).collect(),
        labels: q.labels.clone(),
    })
}

/// Hyperboloid-model distance arccosh(xᵀQy).
///
/// Evaluated through the cancellation-free identity
/// arccosh(1 + u) = 2 asinh(√(u/2)) with u = −Q(x−y, x−y)/2, so coincident
/// points give exactly zero and nearby points lose no precision. For
/// unit-area points in one positive cone u ≥ 0 up to rounding; values within
/// 1e−12 below zero are clamped.
pub fn distance(x: &ModuliPoint, y: &ModuliPoint, q: &AreaForm) -> Result<f64, ModuliError> {
    if x.labels != q.labels || y.labels != q.labels {
        return Err(ModuliError::IncompatibleForms);
    }
    let diff: Vec<f64> = x
        .lengths
        .iter()
        .zip(&y.lengths)
        .map(|(a, b)| a - b)
        .collect();
    let u = -0.5 * q.area(&diff);
    if u < -1e-12 {
        return Err(ModuliError::OutsideChart(1.0 + u));
    }
    Ok(2.0 * (0.5 * u.max(0.0)).sqrt().asinh())
}

/// Report of the ideal-simplex verification on a chart's area form.
#[derive(Debug, Clone)]
pub struct IdealSimplexReport {
    /// |Q(e_i, e_i)| per axis; zero exactly for ideal vertices.
    pub null_residuals: Vec<f64>,
    pub n_vertices: usize,
    pub n_facets: usize,
    /// Facets incident to each vertex (k−1 each for a simplex).
    pub facets_per_vertex: Vec<usize>,
    /// Signature of Q restricted to each coordinate hyperplane.
    pub facet_signatures: Vec<(usize, usize, usize)>,
    /// RMS misfit of log Q_ij = u_i + u_j + c over i ≠ j; zero exactly when
    /// a positive rescaling of the vertices equalizes all Gram entries.
    pub regularity_residual: f64,
}

/// Verifies the ideal-simplex structure of the chart closure and measures the
/// regularity residual.
pub fn ideal_simplex_check(q: &AreaForm) -> Result<IdealSimplexReport, ModuliError> {
    let k = q.k();
    let sig = signature(&q.mat);
    if sig != (1, k - 1, 0) {
        return Err(ModuliError::WrongSignature(sig.0, sig.1, sig.2));
    }
    let null_residuals: Vec<f64> = (0..k).map(|i| q.entry(i, i).abs()).collect();
    // Vertex e_i lies on facet {l_j = 0} exactly when j ≠ i.
    let facets_per_vertex = vec![k - 1; k];
    let mut facet_signatures = Vec::with_capacity(k);
    for facet in 0..k {
        let mut sub = Mat::zeros(k - 1);
        let keep: Vec<usize> = (0..k).filter(|i| *i != facet).collect();
        for (r, i) in keep.iter().enumerate() {
            for (c, j) in keep.iter().enumerate() {
                sub[(r, c)] = q.entry(*i, *j);
            }
        }
        facet_signatures.push(signature(&sub));
    }
    // Gram entries are sines of angles in (0, π), hence positive; fit their
    // logs by a vertex-rescaling model (the constant c is absorbed into the
    // per-vertex terms).
    let (_, regularity_residual) = fit_pairwise_sum(k, &|i, j| q.entry(i, j).ln());
    Ok(IdealSimplexReport {
        null_residuals,
        n_vertices: k,
        n_facets: k,
        facets_per_vertex,
        facet_signatures,
        regularity_residual,
    })
}

/// Element of the dihedral group acting on the six length coordinates:
/// r^rot, optionally preceded by the reflection s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct D6Element {
    pub rot: u8,
    pub reflect: bool,
}

impl D6Element {
    pub fn all() -> Vec<D6Element> {
        let mut out = Vec::with_capacity(12);
        for reflect in [false, true] {
            for rot in 0..6 {
                out.push(D6Element { rot, reflect });
            }
        }
        out
    }
}

/// Generator r: (a,b,c,d,e,f) ↦ (c,d,e,f,b,a).
pub const D6_R: [usize; 6] = [2, 3, 4, 5, 1, 0];
/// Generator s: (a,b,c,d,e,f) ↦ (f,e,d,c,b,a).
pub const D6_S: [usize; 6] = [5, 4, 3, 2, 1, 0];

fn apply_perm(perm: &[usize; 6], l: &[f64]) -> Vec<f64> {
    perm.iter().map(|&i| l[i]).collect()
}

/// Applies a group element to a 6-loop length vector.
pub fn d6_apply(g: D6Element, l: &[f64]) -> Result<Vec<f64>, ModuliError> {
    if l.len() != 6 {
        return Err(ModuliError::WrongChart(l.len()));
    }
    let mut v = l.to_vec();
    if g.reflect {
        v = apply_perm(&D6_S, &v);
    }
    for _ in 0..g.rot {
        v = apply_perm(&D6_R, &v);
    }
    Ok(v)
}

/// Lexicographically minimal vector over the 12-element orbit; equal exactly
/// for Γ-equivalent length vectors.
pub fn canonical_rep(l: &[f64]) -> Result<Vec<f64>, ModuliError> {
    if l.len() != 6 {
        return Err(ModuliError::WrongChart(l.len()));
    }
    let mut best: Option<Vec<f64>> = None;
    for g in D6Element::all() {
        let v = d6_apply(g, l)?;
        let better = match &best {
            None => true,
            Some(b) => v
                .iter()
                .zip(b.iter())
                .find_map(|(x, y)| {
                    if x < y {
                        Some(true)
                    } else if x > y {
                        Some(false)
                    } else {
                        None
                    }
                })
                .unwrap_or(false),
        };
        if better {
            best = Some(v);
        }
    }
    Ok(best.unwrap())
}

/// Size of the orbit of `l` under the group (counting distinct vectors).
pub fn orbit_size(l: &[f64]) -> Result<usize, ModuliError> {
    let mut orbit: Vec<Vec<f64>> = Vec::new();
    for g in D6Element::all() {
        let v = d6_apply(g, l)?;
        if !orbit.iter().any(|o| o == &v) {
            orbit.push(v);
        }
    }
    Ok(orbit.len())
}

/// Applies a group element's permutation to the area form: PᵀQP.
pub fn permuted_form(q: &AreaForm, g: D6Element) -> Result<Mat, ModuliError> {
    if q.k() != 6 {
        return Err(ModuliError::WrongChart(q.k()));
    }
    // Column x of P has a 1 in row perm(x): (PᵀQP)_{xy} = Q_{perm(x),perm(y)}
    // where perm is the index map of the applied element.
    let mut perm: [usize; 6] = [0, 1, 2, 3, 4, 5];
    if g.reflect {
        let mut next = [0usize; 6];
        for (i, n) in next.iter_mut().enumerate() {
            *n = perm[D6_S[i]];
        }
        perm = next;
    }
    for _ in 0..g.rot {
        let mut next = [0usize; 6];
        for (i, n) in next.iter_mut().enumerate() {
            *n = perm[D6_R[i]];
        }
        perm = next;
    }
    let mut out = Mat::zeros(6);
    for x in 0..6 {
        for y in 0..6 {
            out[(x, y)] = q.entry(perm[x], perm[y]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d6_generator_examples() {
        let l = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let r = d6_apply(
            D6Element {
                rot: 1,
                reflect: false,
            },
            &l,
        )
        .unwrap();
        assert_eq!(r, vec![3.0, 4.0, 5.0, 6.0, 2.0, 1.0]);
        let s = d6_apply(
            D6Element {
                rot: 0,
                reflect: true,
            },
            &l,
        )
        .unwrap();
        assert_eq!(s, vec![6.0, 5.0, 4.0, 3.0, 2.0, 1.0]);
    }

    fn compose(a: &[usize; 6], b: &[usize; 6]) -> [usize; 6] {
        // Index map of applying `a` first, then `b`, as vector permutations.
        let mut out = [0usize; 6];
        for i in 0..6 {
            out[i] = a[b[i]];
        }
        out
    }

    #[test]
    fn d6_relations_hold() {
        // r^6 = id, s^2 = id, (s r)^2 = id as index maps.
        let id = [0usize, 1, 2, 3, 4, 5];
        let mut r6 = id;
        for _ in 0..6 {
            r6 = compose(&D6_R, &r6);
        }
        assert_eq!(r6, id);
        assert_eq!(compose(&D6_S, &D6_S), id);
        let sr = compose(&D6_S, &D6_R);
        assert_eq!(compose(&sr, &sr), id);
        // Group order is 12: all elements act distinctly on a generic vector.
        let l = [1.0, 2.0, 3.5, 4.25, 5.125, 6.0625];
        assert_eq!(orbit_size(&l).unwrap(), 12);
    }

    #[test]
    fn canonical_rep_is_orbit_invariant() {
        let l = [0.3, 1.7, 0.9, 2.2, 1.1, 0.5];
        let c = canonical_rep(&l).unwrap();
        for g in D6Element::all() {
            let moved = d6_apply(g, &l).unwrap();
            assert_eq!(canonical_rep(&moved).unwrap(), c);
        }
        let uniform = [1.0; 6];
        assert_eq!(canonical_rep(&uniform).unwrap(), vec![1.0; 6]);
        assert_eq!(orbit_size(&uniform).unwrap(), 1);
    }
}
