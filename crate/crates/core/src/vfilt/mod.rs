//! V-filtrations: level functions, graded pieces and axiom checks.

mod axioms;
mod compare;
mod extension;
mod graded;
mod spec;

pub use axioms::{
    best_t_preimage, check_specializing, check_super, Axiom, AxiomReport, AxiomResult, LevelStatus, Status, Witness,
};
pub use compare::{compare, compare_presentations, pullback_filtration, Comparison, Pullback, Relation};
pub use extension::{
    delta_vfilt, mc_depth_grading, mc_vfilt, shifted_exactness, split_vfilt, standard_vfilt, ShiftedExactness,
};
pub use graded::{graded, graded_keys, transition, GradedLevel, GradedReport, Transition};
pub use spec::{maximize_level, FiltrationSpec, Rule, Window};
