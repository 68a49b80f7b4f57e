//! Finite model theory: structures, K-congruences, induced operators and the
//! free-structure pipelines.

pub mod free;
pub mod kcon;
pub mod structure;

pub use free::{
    free_structure, free_structure_second, reduction_check, verify_combined, verify_pseudo_lemma, verify_second,
    FreeStructure, ReductionReport,
};
pub use kcon::{endomorphisms, k_congruences, CompactConSemilattice, Generator, StructureCongruence};
pub use structure::{compile, compile_all, enumerate_models, satisfies, CompiledLaw, FiniteStructure, ModelSearch, Signature};
