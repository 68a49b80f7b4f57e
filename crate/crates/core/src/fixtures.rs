//! Built-in examples reachable by name.

use crate::analysis::dual_leaf;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::lattice::FiniteLattice;
use crate::monoid::{Operator, DEFAULT_CLOSURE_BOUND};
use crate::presentation::{present_dual_near_leaf, Presentation, DEFAULT_SCHEMA_BOUND};
use crate::semilattice::Semilattice;

pub const FIXTURE_NAMES: &[&str] = &[
    "chain3",
    "s22-swap",
    "s22-trivial",
    "omega-N",
    "dual-leaf",
    "dual-near-leaf",
];

#[derive(Debug, Clone)]
pub enum Fixture {
    Instance(Instance),
    Lattice(FiniteLattice),
    Presentation(Presentation),
}

/// `0 < a < b < 1` style diamond `{0, a, b, 1}`.
pub fn s22() -> Semilattice {
    Semilattice::from_order(4, |x, y| x == y || x == 0 || y == 3).expect("diamond")
}

pub fn chain3() -> Instance {
    Instance::trivial(Semilattice::chain(3))
}

pub fn s22_swap() -> Instance {
    let s = s22();
    let sigma = Operator::new(&s, vec![0, 2, 1, 3]).expect("swap is an automorphism");
    Instance::new(s, vec![("sigma".into(), sigma)], DEFAULT_CLOSURE_BOUND).expect("two-element group")
}

pub fn s22_trivial() -> Instance {
    Instance::trivial(s22())
}

/// Chain `0 < 1 < ... < n` with `p(0) = 0` and `p(x) = x - 1`.
pub fn omega(n: usize) -> Instance {
    let s = Semilattice::chain(n + 1);
    let p = Operator::new(&s, (0..=n).map(|x| x.saturating_sub(1)).collect()).expect("p preserves max");
    Instance::new(s, vec![("p".into(), p)], DEFAULT_CLOSURE_BOUND).expect("p is nilpotent")
}

/// Instances used by the pipeline checks.
pub fn pipeline_fixtures() -> Vec<(&'static str, Instance)> {
    vec![("chain3", chain3()), ("s22-swap", s22_swap()), ("s22-trivial", s22_trivial())]
}

pub fn fixture(name: &str) -> Result<Fixture> {
    Ok(match name {
        "chain3" => Fixture::Instance(chain3()),
        "s22-swap" => Fixture::Instance(s22_swap()),
        "s22-trivial" => Fixture::Instance(s22_trivial()),
        "dual-leaf" => Fixture::Lattice(dual_leaf()),
        "dual-near-leaf" => Fixture::Presentation(present_dual_near_leaf(DEFAULT_SCHEMA_BOUND)),
        _ => match name.strip_prefix("omega-").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if (1..=62).contains(&n) => Fixture::Instance(omega(n)),
            _ => {
                return Err(Error::Parse {
                    line: 0,
                    column: 0,
                    message: format!("unknown fixture {name}; known: {}", FIXTURE_NAMES.join(", ")),
                })
            }
        },
    })
}
