//! Lattice and semilattice checks: the dual leaf, the pseudo-one
//! equalization property, cofinal orbits and filter intervals.

use std::fmt::Write as _;

use crate::congruence::{generated_congruence, is_compatible, Congruence, CongruenceLattice};
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::monoid::OperatorMonoid;
use crate::partition::Partition;
use crate::semilattice::{bit, has, members, Mask, Semilattice};

/// Convex subsets of the chain `1 < 2 < 3 < 4` as masks (bit `k-1` for `k`),
/// the empty set first.
pub fn convex_subsets_of_four() -> Vec<Mask> {
    let mut out = vec![0];
    for lo in 0..4 {
        for hi in lo..4 {
            out.push((bit(hi + 1) - 1) & !(bit(lo) - 1));
        }
    }
    out
}

fn convex_label(m: Mask) -> String {
    let items: Vec<String> = members(m).map(|k| (k + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// `1 ∔ Co(4)`: a new least element `⊥` below the convex subsets of a
/// 4-element chain ordered by inclusion.
pub fn one_plus_co4() -> FiniteLattice {
    let co = convex_subsets_of_four();
    let mut labels = vec!["bot".to_string()];
    labels.extend(co.iter().map(|&m| convex_label(m)));
    FiniteLattice::from_order(labels, |a, b| {
        a == 0 || (b != 0 && co[a - 1] & !co[b - 1] == 0)
    })
    .expect("1 + Co(4) is a lattice")
}

/// The dual leaf: order dual of `1 ∔ Co(4)`, 12 elements.
pub fn dual_leaf() -> FiniteLattice {
    one_plus_co4().dual()
}

/// Explanation attached to every pseudo-one report.
pub const OMEGA_NOTE: &str = "note: the chain omega with p(0)=0, p(x)=x-1 has congruence lattice omega+1, \
which has no pseudo-one; that example is infinite and cannot be exhibited by a finite check \
(finite truncations omega-N pass with k=top, since top itself lies in the orbit join-closure)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudopropReport {
    /// Least `k` that works, if any.
    pub k: Option<usize>,
    /// `(s, f, j)`: least `j` in the orbit join-closure with `f(s)+j = s+j`.
    pub witnesses: Vec<(usize, usize, usize)>,
}

impl PseudopropReport {
    pub fn render(&self, m: &OperatorMonoid) -> String {
        let mut out = String::new();
        match self.k {
            Some(k) => {
                let _ = writeln!(out, "pseudoprop=true\nk={k}");
                for &(s, f, j) in &self.witnesses {
                    let _ = writeln!(out, "witness s={s} f={} j={j}", m.name(f));
                }
            }
            None => out.push_str("pseudoprop=false\n"),
        }
        out.push_str(OMEGA_NOTE);
        out.push('\n');
        out
    }
}

/// Joins of nonempty subsets of the orbit `{g(k) : g ∈ M}`.
pub fn orbit_join_closure(s: &Semilattice, m: &OperatorMonoid, k: usize) -> Mask {
    let mut closed: Mask = m.elements().iter().fold(0, |acc, g| acc | bit(g.apply(k)));
    loop {
        let mut next = closed;
        for a in members(closed) {
            for b in members(closed) {
                next |= bit(s.join(a, b));
            }
        }
        if next == closed {
            return closed;
        }
        closed = next;
    }
}

/// Witnesses for a fixed `k`, or `None` if some `(s, f)` has no equalizer.
pub fn pseudoprop_at(s: &Semilattice, m: &OperatorMonoid, k: usize) -> Option<Vec<(usize, usize, usize)>> {
    let closure = orbit_join_closure(s, m, k);
    let mut out = Vec::new();
    for x in s.elements() {
        for (fi, f) in m.elements().iter().enumerate() {
            let j = members(closure).find(|&j| s.join(f.apply(x), j) == s.join(x, j))?;
            out.push((x, fi, j));
        }
    }
    Some(out)
}

/// Searches `k` in ascending order.
pub fn pseudoprop_check(s: &Semilattice, m: &OperatorMonoid) -> PseudopropReport {
    for k in s.elements() {
        if let Some(witnesses) = pseudoprop_at(s, m, k) {
            return PseudopropReport { k: Some(k), witnesses };
        }
    }
    PseudopropReport {
        k: None,
        witnesses: Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofinalReport {
    /// Every `u` whose orbit `{f(u)}` is cofinal.
    pub cofinal: Vec<usize>,
    /// ∇ equals the join of all principal congruences.
    pub full_is_finite_join: bool,
}

impl CofinalReport {
    pub fn render(&self) -> String {
        let list: Vec<String> = self.cofinal.iter().map(|u| u.to_string()).collect();
        format!(
            "cofinal_orbits={}\nfull_congruence_compact={}\nfull_is_finite_join_of_principals={}\n",
            list.join(","),
            !self.cofinal.is_empty(),
            self.full_is_finite_join
        )
    }
}

pub fn cofinal_compact_check(s: &Semilattice, m: &OperatorMonoid) -> CofinalReport {
    let cofinal = s
        .elements()
        .filter(|&u| {
            s.elements()
                .all(|x| m.elements().iter().any(|f| s.leq(x, f.apply(u))))
        })
        .collect();
    let all = generated_congruence(s, m, &s.strict_pairs());
    CofinalReport {
        cofinal,
        full_is_finite_join: all.partition().is_full() || s.size() == 1,
    }
}

/// Order filter containing top and satisfying
/// `f(a)+s ∈ F ⇒ f(b)+s ∈ F` for all `f ∈ M`, `a, b ∈ F`, `s ∈ S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarFilter {
    members: Mask,
}

impl StarFilter {
    pub fn new(s: &Semilattice, m: &OperatorMonoid, members_mask: Mask) -> Result<Self> {
        let label = || format!("{:?}", members(members_mask).collect::<Vec<_>>());
        if !has(members_mask, s.top()) {
            return Err(Error::NotAFilter(label()));
        }
        if members(members_mask).any(|x| s.up_set(x) & !members_mask != 0) {
            return Err(Error::NotAFilter(label()));
        }
        for (f, op) in m.elements().iter().enumerate() {
            for a in members(members_mask) {
                for b in members(members_mask) {
                    for t in s.elements() {
                        if has(members_mask, s.join(op.apply(a), t))
                            && !has(members_mask, s.join(op.apply(b), t))
                        {
                            return Err(Error::StarConditionFails { f, a, b, s: t });
                        }
                    }
                }
            }
        }
        Ok(StarFilter { members: members_mask })
    }

    pub fn members(&self) -> Mask {
        self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        has(self.members, x)
    }
}

/// The block of top, `1/θ`.
pub fn top_block(s: &Semilattice, theta: &Congruence) -> Mask {
    theta.block_of(s.top())
}

#[derive(Debug, Clone)]
pub struct FilterInterval {
    pub phi: Congruence,
    pub psi: Congruence,
    /// Indices into the congruence lattice of the members with `1/θ = F`.
    pub members: Vec<usize>,
}

/// φ(F), ψ(F) and the congruences whose top block is `F`, checked to be
/// exactly the interval `[φ(F), ψ(F)]`.
pub fn star_filter_interval(
    s: &Semilattice,
    m: &OperatorMonoid,
    con: &CongruenceLattice,
    filter: &StarFilter,
) -> Result<FilterInterval> {
    let fm = filter.members();
    let mut pairs = Vec::new();
    for f in m.elements() {
        for a in members(fm) {
            for b in members(fm) {
                for t in s.elements() {
                    pairs.push((s.join(f.apply(a), t), s.join(f.apply(b), t)));
                }
            }
        }
    }
    let phi = generated_congruence(s, m, &pairs);

    // ψ: x ~ y iff every translate f(·)+t lands in F for both or neither
    let signature = |x: usize| -> Vec<bool> {
        m.elements()
            .iter()
            .flat_map(|f| s.elements().map(move |t| (f, t)))
            .map(|(f, t)| has(fm, s.join(f.apply(x), t)))
            .collect()
    };
    let sigs: Vec<Vec<bool>> = s.elements().map(signature).collect();
    let labels: Vec<usize> = (0..s.size())
        .map(|x| (0..s.size()).find(|&y| sigs[y] == sigs[x]).unwrap_or(x))
        .collect();
    let psi_partition = Partition::from_labels(&labels);
    if !is_compatible(s, m, &psi_partition) {
        return Err(Error::ClosureFailure(format!(
            "psi relation {} is not a congruence",
            psi_partition.label()
        )));
    }
    let psi = Congruence::from_partition(s, m, psi_partition).expect("checked compatible");

    let members_list: Vec<usize> = (0..con.len())
        .filter(|&i| top_block(s, &con.elements[i]) == fm)
        .collect();
    let interval: Vec<usize> = (0..con.len())
        .filter(|&i| phi.leq(&con.elements[i]) && con.elements[i].leq(&psi))
        .collect();
    if members_list != interval {
        return Err(Error::ClosureFailure(format!(
            "congruences with top block F differ from [phi, psi] = [{}, {}]",
            phi.label(),
            psi.label()
        )));
    }
    Ok(FilterInterval {
        phi,
        psi,
        members: members_list,
    })
}
