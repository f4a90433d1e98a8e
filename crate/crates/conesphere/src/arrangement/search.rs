//! Rejection-sampling realization of arrangements from bipartition specs.
//!
//! A bipartition spec fixes, per loop, which side of the loop each labeled
//! vertex must fall on. The sampler draws normals inside the admissible cone
//! (mean of the signed vertex directions plus shrinking jitter), then rejects
//! until the joint general-position constraints hold: no vertex on a loop, no
//! two loops parallel or homotopic, no three concurrent.
//!
//! The result depends only on `(spec, seed)`. Attempts are indexed and the
//! first successful index wins, so the parallel and sequential drivers return
//! the same arrangement.

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::arrangement::{validate, Bipartition, LabeledVertexSet, LoopArrangement, OrientedLoop};
use crate::geom::{normalize3, triple, Rng, UnitVec3};

/// Target bipartition for one loop: the pairs whose positive vertex lies on
/// the normal side. Also fixes the searched loop's orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSpec {
    pub label: String,
    pub plus_pairs: Vec<usize>,
}

impl LoopSpec {
    pub fn target_signs(&self, n_pairs: usize) -> Vec<i8> {
        let mut s = vec![-1i8; n_pairs];
        for &p in &self.plus_pairs {
            s[p] = 1;
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct SearchParams {
    /// Independent restarts before giving up.
    pub budget: u64,
    /// Normal draws per loop within one attempt.
    pub tries_per_loop: u32,
    /// Required margin |n·v| for every loop/vertex pair.
    pub margin_vertex: f64,
    /// Required margin |det(n_i, n_j, n_k)| for every loop triple.
    pub margin_concur: f64,
    /// Required margin |n_i × n_j| for every loop pair.
    pub margin_parallel: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            budget: 600,
            tries_per_loop: 300,
            margin_vertex: 1e-4,
            margin_concur: 2e-3,
            margin_parallel: 1e-2,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("spec is unrealizable within the attempt budget: {0}")]
    Unrealizable(String),
}

fn sample_loop(
    rng: &mut Rng,
    vs: &LabeledVertexSet,
    target: &[i8],
    params: &SearchParams,
    accepted: &[UnitVec3],
) -> Option<UnitVec3> {
    let mut mean = [0.0f64; 3];
    for (p, v) in vs.positions().iter().enumerate() {
        let s = target[p] as f64;
        mean[0] += s * v.x;
        mean[1] += s * v.y;
        mean[2] += s * v.z;
    }
    let mean = normalize3(mean).ok();
    'tries: for t in 0..params.tries_per_loop {
        // Anneal the jitter: wide early, tight late.
        let tau = 0.9 * (1.0 - t as f64 / params.tries_per_loop as f64) + 0.05;
        let cand = match &mean {
            Some(m) => normalize3([
                m.x + tau * rng.normal(),
                m.y + tau * rng.normal(),
                m.z + tau * rng.normal(),
            ])
            .ok()?,
            None => rng.unit_vec(),
        };
        for (p, v) in vs.positions().iter().enumerate() {
            let d = cand.dot(v);
            if d.abs() <= params.margin_vertex || (d > 0.0) != (target[p] > 0) {
                continue 'tries;
            }
        }
        for other in accepted {
            if crate::geom::norm3(cand.cross(other)) <= params.margin_parallel {
                continue 'tries;
            }
        }
        for a in 0..accepted.len() {
            for b in (a + 1)..accepted.len() {
                if triple(&accepted[a], &accepted[b], &cand).abs() <= params.margin_concur {
                    continue 'tries;
                }
            }
        }
        return Some(cand);
    }
    None
}

fn attempt(
    seed: u64,
    index: u64,
    specs: &[LoopSpec],
    vs: &LabeledVertexSet,
    deficits: &[f64],
    params: &SearchParams,
) -> Option<LoopArrangement> {
    let mut rng = Rng::new(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1));
    let n = vs.n_pairs();
    let mut normals: Vec<UnitVec3> = Vec::with_capacity(specs.len());
    for spec in specs {
        let target = spec.target_signs(n);
        let cand = sample_loop(&mut rng, vs, &target, params, &normals)?;
        normals.push(cand);
    }
    let arr = LoopArrangement {
        vertices: vs.clone(),
        loops: specs
            .iter()
            .zip(normals)
            .map(|(s, normal)| OrientedLoop {
                label: s.label.clone(),
                normal,
            })
            .collect(),
        deficits: deficits.to_vec(),
    };
    if validate(&arr).is_valid() {
        Some(arr)
    } else {
        None
    }
}

/// Searches for a valid arrangement whose loop `k` induces `specs[k]`.
///
/// Deterministic for a fixed `(specs, vs, deficits, seed)`; the parallel
/// driver picks the first successful attempt index, matching the sequential
/// fallback.
pub fn search_arrangement(
    specs: &[LoopSpec],
    vs: &LabeledVertexSet,
    deficits: &[f64],
    seed: u64,
    params: &SearchParams,
) -> Result<LoopArrangement, SearchError> {
    let n = vs.n_pairs();
    // Precondition: target bipartitions pairwise distinct.
    let classes: Vec<Bipartition> = specs
        .iter()
        .map(|s| Bipartition::from_signs(s.target_signs(n)))
        .collect();
    for i in 0..classes.len() {
        for j in (i + 1)..classes.len() {
            if classes[i] == classes[j] {
                return Err(SearchError::Unrealizable(format!(
                    "loops `{}` and `{}` request the same bipartition",
                    specs[i].label, specs[j].label
                )));
            }
        }
    }

    let run = |t: u64| attempt(seed, t, specs, vs, deficits, params);

    #[cfg(feature = "parallel")]
    let found = (0..params.budget).into_par_iter().find_map_first(run);
    #[cfg(not(feature = "parallel"))]
    let found = (0..params.budget).find_map(run);

    found.ok_or_else(|| {
        SearchError::Unrealizable(format!(
            "no valid arrangement after {} attempts",
            params.budget
        ))
    })
}
