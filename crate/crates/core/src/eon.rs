//! Eon relations: reflexive, transitive, compatible relations contained in
//! the order and closed under the interval condition
//! `x <= y <= z, x R z  =>  x R y`.
//!
//! Relations are stored as one row mask per element: bit `y` of row `x` is
//! set iff `x R y`.

use std::collections::BTreeSet;

use crate::congruence::{Congruence, CongruenceLattice};
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::monoid::OperatorMonoid;
use crate::partition::Partition;
use crate::semilattice::{bit, has, members, Mask, Semilattice};

/// Largest carrier scanned exhaustively in [`EonMode::Auto`].
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EonRelation {
    rows: Vec<Mask>,
}

impl EonRelation {
    pub fn identity(n: usize) -> Self {
        EonRelation {
            rows: (0..n).map(bit).collect(),
        }
    }

    /// The order relation itself, the greatest eon relation.
    pub fn order(s: &Semilattice) -> Self {
        EonRelation {
            rows: s.elements().map(|x| s.up_set(x)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Mask>) -> Self {
        EonRelation { rows }
    }

    pub fn rows(&self) -> &[Mask] {
        &self.rows
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        has(self.rows[x], y)
    }

    pub fn leq(&self, other: &EonRelation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn pair_count(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    /// Non-diagonal pairs, e.g. `[0<1,0<2]`; `[]` for Δ.
    pub fn label(&self) -> String {
        let mut pairs = Vec::new();
        for (x, &row) in self.rows.iter().enumerate() {
            for y in members(row) {
                if x != y {
                    pairs.push(format!("{x}<{y}"));
                }
            }
        }
        format!("[{}]", pairs.join(","))
    }

    pub fn is_eon(&self, s: &Semilattice, m: &OperatorMonoid) -> bool {
        let n = s.size();
        let rows = &self.rows;
        for x in 0..n {
            if !has(rows[x], x) || rows[x] & !s.up_set(x) != 0 {
                return false;
            }
            for y in members(rows[x]) {
                if rows[y] & !rows[x] != 0 {
                    return false;
                }
                if s.up_set(x) & s.down_set(y) & !rows[x] != 0 {
                    return false;
                }
                for t in 0..n {
                    if !has(rows[s.join(x, t)], s.join(y, t)) {
                        return false;
                    }
                }
                for f in m.elements() {
                    if !has(rows[f.apply(x)], f.apply(y)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Least eon relation containing the listed pairs (each must satisfy `a <= b`).
pub fn generated_eon(s: &Semilattice, m: &OperatorMonoid, pairs: &[(usize, usize)]) -> EonRelation {
    let n = s.size();
    let mut rows: Vec<Mask> = (0..n).map(bit).collect();
    for &(a, b) in pairs {
        rows[a] |= bit(b);
    }
    loop {
        let before = rows.clone();
        // operations: translations and operators
        for x in 0..n {
            for y in members(rows[x]) {
                for t in 0..n {
                    rows[s.join(x, t)] |= bit(s.join(y, t));
                }
                for f in m.elements() {
                    rows[f.apply(x)] |= bit(f.apply(y));
                }
            }
        }
        // transitivity
        loop {
            let mut changed = false;
            for x in 0..n {
                let reach = members(rows[x]).fold(rows[x], |acc, y| acc | rows[y]);
                if reach != rows[x] {
                    rows[x] = reach;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        // interval condition
        for x in 0..n {
            let hull = members(rows[x]).fold(0, |acc, z| acc | s.down_set(z)) & s.up_set(x);
            rows[x] |= hull;
        }
        if rows == before {
            return EonRelation { rows };
        }
    }
}

/// The principal eon relation ⟨a,b⟩.
pub fn principal_eon(s: &Semilattice, m: &OperatorMonoid, a: usize, b: usize) -> Result<EonRelation> {
    if !s.leq(a, b) {
        return Err(Error::NotBelow(a, b));
    }
    Ok(generated_eon(s, m, &[(a, b)]))
}

pub fn eon_join(s: &Semilattice, m: &OperatorMonoid, a: &EonRelation, b: &EonRelation) -> EonRelation {
    let mut pairs = Vec::new();
    for r in [a, b] {
        for (x, &row) in r.rows.iter().enumerate() {
            pairs.extend(members(row).filter(|&y| y != x).map(|y| (x, y)));
        }
    }
    generated_eon(s, m, &pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EonMode {
    /// Exhaustive scan up to the bound, join-closure above it.
    Auto,
    /// Scan every relation between Δ and ≤; errors above the bound.
    Exhaustive,
    /// Join-closure of principal eon relations.
    JoinClosure,
}

#[derive(Debug, Clone)]
pub struct EonLattice {
    pub elements: Vec<EonRelation>,
    pub lattice: FiniteLattice,
}

impl EonLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, r: &EonRelation) -> Option<usize> {
        self.elements.iter().position(|e| e == r)
    }
}

pub fn eon_lattice(s: &Semilattice, m: &OperatorMonoid, mode: EonMode, exhaustive_bound: usize) -> Result<EonLattice> {
    let exhaustive = match mode {
        EonMode::Auto => s.size() <= exhaustive_bound,
        EonMode::Exhaustive => {
            if s.size() > exhaustive_bound {
                return Err(Error::CarrierTooLarge {
                    size: s.size(),
                    bound: exhaustive_bound,
                });
            }
            true
        }
        EonMode::JoinClosure => false,
    };
    let mut elements: Vec<EonRelation> = if exhaustive {
        scan_all(s, m)
    } else {
        join_closure(s, m)
    };
    elements.sort_by(|a, b| a.pair_count().cmp(&b.pair_count()).then_with(|| a.cmp(b)));
    let lattice = FiniteLattice::from_order(elements.iter().map(|e| e.label()).collect(), |a, b| {
        elements[a].leq(&elements[b])
    })?;
    Ok(EonLattice { elements, lattice })
}

fn scan_all(s: &Semilattice, m: &OperatorMonoid) -> Vec<EonRelation> {
    let pairs = s.strict_pairs();
    assert!(pairs.len() < 40, "relation space too large to scan");
    let mut out = Vec::new();
    for choice in 0u64..1 << pairs.len() {
        let mut rows: Vec<Mask> = s.elements().map(bit).collect();
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if has(choice, k) {
                rows[a] |= bit(b);
            }
        }
        let r = EonRelation { rows };
        if r.is_eon(s, m) {
            out.push(r);
        }
    }
    out
}

fn join_closure(s: &Semilattice, m: &OperatorMonoid) -> Vec<EonRelation> {
    let principals: BTreeSet<EonRelation> = s
        .strict_pairs()
        .into_iter()
        .map(|(a, b)| generated_eon(s, m, &[(a, b)]))
        .collect();
    let mut set: BTreeSet<EonRelation> = principals.clone();
    set.insert(EonRelation::identity(s.size()));
    let mut frontier: Vec<EonRelation> = principals.iter().cloned().collect();
    while let Some(r) = frontier.pop() {
        for p in &principals {
            let j = eon_join(s, m, &r, p);
            if set.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    set.into_iter().collect()
}

/// θ ↦ θ ∩ ≤.
pub fn restrict_to_order(s: &Semilattice, theta: &Congruence) -> EonRelation {
    EonRelation {
        rows: s.elements().map(|x| theta.block_of(x) & s.up_set(x)).collect(),
    }
}

/// R ↦ {(x,y) : x R x+y and y R x+y}, returned as a partition if it is an
/// equivalence relation.
pub fn expand_to_equivalence(s: &Semilattice, r: &EonRelation) -> Option<Partition> {
    let n = s.size();
    let rel = |x: usize, y: usize| {
        let j = s.join(x, y);
        r.contains(x, j) && r.contains(y, j)
    };
    let labels: Vec<usize> = (0..n)
        .map(|x| (0..n).find(|&y| rel(x, y)).unwrap_or(x))
        .collect();
    let p = Partition::from_labels(&labels);
    let consistent = (0..n).all(|x| (0..n).all(|y| rel(x, y) == p.related(x, y)));
    consistent.then_some(p)
}

/// Verifies that θ ↦ θ∩≤ is an order isomorphism `Con -> Eon` inverted by
/// [`expand_to_equivalence`]. Returns `(congruence index, eon index)` pairs.
pub fn con_eon_isomorphism(
    s: &Semilattice,
    con: &CongruenceLattice,
    eon: &EonLattice,
) -> Result<Vec<(usize, usize)>> {
    if con.len() != eon.len() {
        return Err(Error::IsomorphismFailure(format!(
            "{} congruences but {} eon relations",
            con.len(),
            eon.len()
        )));
    }
    let mut pairing = Vec::with_capacity(con.len());
    let mut hit = vec![false; eon.len()];
    for (i, theta) in con.elements.iter().enumerate() {
        let r = restrict_to_order(s, theta);
        let j = eon.index_of(&r).ok_or_else(|| {
            Error::IsomorphismFailure(format!("{} ∩ ≤ = {} is not an eon relation", theta.label(), r.label()))
        })?;
        if hit[j] {
            return Err(Error::IsomorphismFailure(format!("{} hit twice", r.label())));
        }
        hit[j] = true;
        match expand_to_equivalence(s, &r) {
            Some(p) if &p == theta.partition() => {}
            other => {
                return Err(Error::IsomorphismFailure(format!(
                    "inverse of {} gives {:?}, expected {}",
                    r.label(),
                    other.map(|p| p.label()),
                    theta.label()
                )))
            }
        }
        pairing.push((i, j));
    }
    for &(a, ja) in &pairing {
        for &(b, jb) in &pairing {
            let lhs = con.elements[a].leq(&con.elements[b]);
            let rhs = eon.elements[ja].leq(&eon.elements[jb]);
            if lhs != rhs {
                return Err(Error::IsomorphismFailure(format!(
                    "order mismatch between {} and {}",
                    con.elements[a].label(),
                    con.elements[b].label()
                )));
            }
        }
    }
    Ok(pairing)
}

/// Equational eon relations ⋁_{b∈I} ⟨0,b⟩, one per ideal in ideal order,
/// as indices into `eon`. Checks that Δ and ∇ occur and that the set is
/// join-closed.
pub fn equational_elements(s: &Semilattice, m: &OperatorMonoid, eon: &EonLattice) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for ideal in s.ideals() {
        let pairs: Vec<(usize, usize)> = ideal.iter().map(|b| (0, b)).collect();
        let r = generated_eon(s, m, &pairs);
        let idx = eon
            .index_of(&r)
            .ok_or_else(|| Error::ClosureFailure(format!("{} missing from eon lattice", r.label())))?;
        out.push(idx);
    }
    let set: BTreeSet<usize> = out.iter().copied().collect();
    let delta = eon.index_of(&EonRelation::identity(s.size()));
    let nabla = eon.index_of(&EonRelation::order(s));
    if delta.is_none_or(|d| !set.contains(&d)) || nabla.is_none_or(|d| !set.contains(&d)) {
        return Err(Error::ClosureFailure("equational elements miss Δ or ∇".into()));
    }
    for &a in &set {
        for &b in &set {
            if !set.contains(&eon.lattice.join(a, b)) {
                return Err(Error::ClosureFailure(format!(
                    "equational elements not join-closed at {} ∨ {}",
                    eon.elements[a].label(),
                    eon.elements[b].label()
                )));
            }
        }
    }
    Ok(out)
}

/// Outcome of comparing the principal-eon ordering and join rules against
/// brute-force containment.
#[derive(Debug, Clone, Default)]
pub struct RuleReport {
    pub membership_checked: usize,
    pub pairs_checked: usize,
    pub families_checked: usize,
    pub first_failure: Option<String>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Largest strict-pair count for which every family of principal eons is
/// checked; above it families have at most three members.
pub const ALL_FAMILIES_BOUND: usize = 12;

/// `⟨a,b⟩ ≤ ⟨c,d⟩` by the closed-form rule (`a < b`).
pub fn rule_leq(s: &Semilattice, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    s.leq(c, a) && s.leq(b, s.join(a, d))
}

/// `⟨a,b⟩ ≤ ⋁_j ⟨c_j,d_j⟩` by the chain rule: some chain
/// `e1 < f1 = e2 < ... < fk` with `e1 <= a`, every step below a family
/// member, and `a ∨ fk >= b`.
pub fn rule_join_leq(s: &Semilattice, (a, b): (usize, usize), family: &[(usize, usize)]) -> bool {
    let n = s.size();
    let step = |e: usize, f: usize| s.lt(e, f) && family.iter().any(|&cd| rule_leq(s, (e, f), cd));
    let mut reached: Mask = 0;
    let mut frontier: Vec<usize> = (0..n).filter(|&e| s.leq(e, a)).collect();
    let mut seen: Mask = frontier.iter().fold(0, |m, &e| m | bit(e));
    while let Some(e) = frontier.pop() {
        for f in 0..n {
            if step(e, f) {
                reached |= bit(f);
                if !has(seen, f) {
                    seen |= bit(f);
                    frontier.push(f);
                }
            }
        }
    }
    members(reached).any(|f| s.leq(b, s.join(a, f)))
}

pub fn eon_rule_check(s: &Semilattice, m: &OperatorMonoid) -> Result<RuleReport> {
    if !m.is_trivial() {
        return Err(Error::NonTrivialMonoid);
    }
    let mut report = RuleReport::default();
    let strict = s.strict_pairs();
    let principal = |a: usize, b: usize| generated_eon(s, m, &[(a, b)]);
    let principals: Vec<EonRelation> = strict.iter().map(|&(a, b)| principal(a, b)).collect();

    let fail = |report: &mut RuleReport, msg: String| {
        if report.first_failure.is_none() {
            report.first_failure = Some(msg);
        }
    };

    // membership form of the ordering rule
    for c in s.elements() {
        for d in s.elements().filter(|&d| s.leq(c, d)) {
            let r = principal(c, d);
            for x in s.elements() {
                for y in s.elements().filter(|&y| s.leq(x, y)) {
                    report.membership_checked += 1;
                    let formula = x == y || (s.leq(c, x) && s.leq(y, s.join(x, d)));
                    if formula != r.contains(x, y) {
                        fail(&mut report, format!("membership of ({x},{y}) in ⟨{c},{d}⟩"));
                    }
                }
            }
        }
    }

    // ordering rule
    for (k, &ab) in strict.iter().enumerate() {
        for c in s.elements() {
            for d in s.elements().filter(|&d| s.leq(c, d)) {
                report.pairs_checked += 1;
                let brute = principals[k].leq(&principal(c, d));
                if brute != rule_leq(s, ab, (c, d)) {
                    fail(&mut report, format!("⟨{},{}⟩ ≤ ⟨{c},{d}⟩", ab.0, ab.1));
                }
            }
        }
    }

    // join rule over families of principal eons
    let families: Vec<Vec<usize>> = if strict.len() <= ALL_FAMILIES_BOUND {
        (1u64..1 << strict.len())
            .map(|mask| members(mask).collect())
            .collect()
    } else {
        let k = strict.len();
        let mut fams = Vec::new();
        for i in 0..k {
            fams.push(vec![i]);
            for j in i + 1..k {
                fams.push(vec![i, j]);
                for l in j + 1..k {
                    fams.push(vec![i, j, l]);
                }
            }
        }
        fams
    };
    for fam in families {
        report.families_checked += 1;
        let pairs: Vec<(usize, usize)> = fam.iter().map(|&i| strict[i]).collect();
        let joined = generated_eon(s, m, &pairs);
        for (k, &ab) in strict.iter().enumerate() {
            let brute = principals[k].leq(&joined);
            if brute != rule_join_leq(s, ab, &pairs) {
                fail(&mut report, format!("⟨{},{}⟩ ≤ ⋁{:?}", ab.0, ab.1, pairs));
            }
        }
    }
    Ok(report)
}
