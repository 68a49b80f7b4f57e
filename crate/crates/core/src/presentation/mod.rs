//! Quasivariety presentations: syntax, law emission and one-variable
//! reduction.

pub mod emit;
pub mod reduce;
pub mod syntax;

pub use emit::{
    irredundant_covers, p_atoms, predicate_name, present_combined, present_dual_near_leaf, present_first,
    present_second, DEFAULT_SCHEMA_BOUND,
};
pub use reduce::{reduce_to_one_variable, ReductionContext};
pub use syntax::{Atom, Presentation, QuasiIdentity, Style, Term, PRESENTATION_GRAMMAR, VARIABLES};
