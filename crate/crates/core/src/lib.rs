//! Exact length-weighted cycle spaces and integer homology of edge-weighted
//! multigraphs.
//!
//! Lengths are generic over [`Scalar`]; the aliases below fix the exact
//! rational instance, which is what every equality check in this crate is
//! meant for.

// `!(a < b)` is kept on purpose: it rejects NaN for float scalars.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod graph;
pub mod homology;
pub mod json;
pub mod metric;
pub mod scalar;
pub mod spaces;
pub mod z2;

pub use error::{CycleError, Result};
pub use graph::{exhaustion_step, walk_length, ClosedWalk, Edge, Exhaustion, SpanningForest, Step, WeightedMultigraph};
pub use homology::{Circulation, CycleWithMultiplicity, Homology, HomologyClass};
pub use scalar::Scalar;
pub use z2::EdgeSetZ2;

/// Arbitrary-precision rational, the exact scalar.
pub type Rational = num_rational::BigRational;

/// Multigraph with exact rational lengths.
pub type Graph = WeightedMultigraph<Rational>;
/// Multigraph with `f64` lengths, for approximate runs.
pub type GraphF64 = WeightedMultigraph<f64>;
