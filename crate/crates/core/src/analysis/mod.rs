//! Regularity quantities of maps and conjugacies.
//!
//! All moduli here are sampled suprema over finite grids and scale ladders,
//! so every reported value is a lower bound on the true supremum.

mod dilatation;
mod measure;
mod symmetry;
mod tail;

pub use dilatation::{dilatation_report, sampled_dilatation, DilatationReport};
pub use measure::{dyadic_intervals, measure_deviation, measure_deviations};
pub use symmetry::{
    default_scales, qs_ratio, symmetry_modulus, uqs_ratio_endo, CircleHomeo, ConjugacyLift, ModulusReport,
    ModulusRow, Reflected, RATIO_FLOOR,
};
pub use tail::{tail_sum, tail_sum_enumerated, TailMethod, TailRow, TailSumReport};
