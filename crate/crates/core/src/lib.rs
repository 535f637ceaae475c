//! Numerical workbench for degree-`d` circle endomorphisms.
//!
//! Maps are handled through their lifts `F: R -> R` with `F(x + 1) = F(x) + d`
//! and `F(0) = 0`. On top of lift evaluation and branch inversion the crate
//! builds the nested Markov partitions cut by `f^{-n}(0)`, the topological
//! conjugacy `h` with `h ∘ f = g ∘ h` (evaluated as certified enclosures), and
//! the regularity quantities used to talk about such conjugacies: symmetric
//! distortion ratios, uniform quasisymmetry of inverse iterates, Lebesgue
//! measure preservation, cylinder dilatation extremes and avoidance tail sums.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is a pure function
//! of immutable, validated inputs.

#![no_std]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod circle_map;
pub mod conjugacy;
mod error;
mod limits;
pub mod partition;
pub mod solve;
pub mod word;

pub use circle_map::{
    make_conjugated, validate, CircleMap, HomeoSpec, MapSpec, ValidationReport, Violation,
    ViolationKind,
};
pub use conjugacy::{
    conjugacy_eval, conjugacy_residual, endpoint_table, Conjugacy, ConjugacyEnclosure,
    EndpointTable, Residual,
};
pub use error::{Error, Result};
pub use limits::Limits;
pub use partition::{
    bounded_geometry_constant, cylinder_of_point, cylinder_ratios, endpoint_radius, enumerate_level,
    interval_of_word, level_endpoints, mesh, verify_markov, word_of_point, Cylinder, MarkovReport,
};
pub use solve::SolverConfig;
pub use word::Word;
