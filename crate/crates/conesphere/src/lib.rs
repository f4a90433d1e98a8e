//! Parallelogram decompositions of centrally symmetric Euclidean cone
//! spheres.
//!
//! A centrally symmetric convex polyhedral surface with 2N labeled vertices
//! and prescribed cone-deficits decomposes into parallelograms indexed by the
//! intersection points of a loop arrangement on the sphere: 2N−2 great
//! circles, pairwise non-homotopic relative to the labeled vertices, no three
//! concurrent. This crate builds those arrangements, glues and audits the
//! decomposition, unfolds it, computes frame matrices and their
//! determinant-sign side-of-face verdicts, and equips the unit-area slice of
//! a chart with its hyperbolic metric.
//!
//! Modules follow the pipeline:
//! - [`arrangement`]: loops, bipartitions, validation, cell complexes,
//!   randomized realization of combinatorial specs.
//! - [`decomposition`]: the glued parallelogram complex, cone-angle audits,
//!   and the area quadratic form.
//! - [`developing`]: planar unfolding, local frames, frame matrices,
//!   coordinate solves, and side-of-face comparisons.
//! - [`moduli`]: hyperboloid-model distance, ideal-simplex checks, and the
//!   dihedral quotient of the six-loop chart.
//! - [`io`] / [`export`]: canonical JSON, SVG and OBJ nets.
//! - [`catalog`]: frozen reference arrangements and adjacent pairs.

pub mod arrangement;
pub mod catalog;
pub mod decomposition;
pub mod developing;
pub mod export;
pub mod geom;
pub mod io;
pub mod linalg;
pub mod moduli;
