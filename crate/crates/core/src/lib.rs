//! Congruence lattices of finite join-semilattices with operators.

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod congruence;
pub mod eon;
pub mod error;
pub mod fixtures;
pub mod instance;
pub mod lattice;
pub mod model;
pub mod monoid;
pub mod partition;
pub mod presentation;
pub mod report;
pub mod semilattice;

pub use error::{Error, Result};
