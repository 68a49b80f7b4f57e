use thiserror::Error;

/// Errors raised by the library. Each variant renders as a single line so the
/// CLI can print it as a machine-readable reason.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid semilattice: {0}")]
    InvalidSemilattice(String),

    #[error("generator not an operator: {0}")]
    NotAnOperator(String),

    #[error("closure bound exceeded: more than {0} elements")]
    ClosureBoundExceeded(usize),

    #[error("carrier too large for exhaustive mode: {size} elements (bound {bound})")]
    CarrierTooLarge { size: usize, bound: usize },

    #[error("{0} ≰ {1}")]
    NotBelow(usize, usize),

    #[error("non-trivial monoid supplied")]
    NonTrivialMonoid,

    #[error("monoid lacks required property: {0}")]
    MissingProperty(&'static str),

    #[error("condition (*) fails at f={f} a={a} b={b} s={s}")]
    StarConditionFails {
        f: usize,
        a: usize,
        b: usize,
        s: usize,
    },

    #[error("not an order filter containing top: {0}")]
    NotAFilter(String),

    #[error("uninterpreted symbol: {0}")]
    Uninterpreted(String),

    #[error("not reducible: {0}")]
    NotReducible(String),

    #[error("not a lattice: {0}")]
    NotALattice(String),

    #[error("one-element quotient violates law {0}")]
    NoUpsilon(String),

    #[error("isomorphism failure: {0}")]
    IsomorphismFailure(String),

    #[error("unexpected endomorphism: {0}")]
    UnexpectedEndomorphism(String),

    #[error("closure system failure: {0}")]
    ClosureFailure(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
