//! Dijkgraaf–Witten state sums on oriented closed surfaces carrying a codimension-1 defect curve.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: finite groups, `(H, X, G)` bi-sets, characters and exact cyclotomic numbers.
//! - [`twisting`]: the `(alpha, beta, gamma)` twisting data and its four cocycle-type conditions.
//! - [`complex`]: flag-like triangulated surface/curve pairs, vertex orderings and orientation signs.
//! - [`moves`]: flag-like extended Pachner moves and seeded random walks over them.
//! - [`statesum`]: admissible colourings and the untwisted and twisted invariants.
//! - [`fuzz`]: invariance campaigns that recompute the invariant along random move sequences.
//! - [`io`]: JSON document formats for groups, bi-sets, twistings and complexes.

pub mod algebra;
pub mod complex;
pub mod fuzz;
pub mod io;
pub mod moves;
pub mod statesum;
pub mod twisting;

pub use algebra::{BiSet, CyclotomicNumber, FiniteGroup, UnitScalar};
pub use complex::{SurfaceCurveComplex, TriangleClass, VertexOrdering};
pub use moves::{MoveKind, MoveRecord};
pub use statesum::{GaugeData, StateSum};

pub use twisting::TwistingTriple;
