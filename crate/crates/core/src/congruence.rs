//! Congruences of a semilattice with operators and the lattice they form.

use std::collections::BTreeSet;

use crate::lattice::FiniteLattice;
use crate::monoid::OperatorMonoid;
use crate::partition::{Partition, UnionFind};
use crate::semilattice::{bit, Mask, Semilattice};

/// Equivalence compatible with joins and with every operator of the monoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    partition: Partition,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Congruence {
            partition: Partition::discrete(n),
        }
    }

    pub fn full(n: usize) -> Self {
        Congruence {
            partition: Partition::full(n),
        }
    }

    /// Wraps a partition after checking compatibility.
    pub fn from_partition(s: &Semilattice, m: &OperatorMonoid, p: Partition) -> Option<Self> {
        is_compatible(s, m, &p).then_some(Congruence { partition: p })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.partition.related(x, y)
    }

    pub fn leq(&self, other: &Congruence) -> bool {
        self.partition.refines(&other.partition)
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        Congruence {
            partition: self.partition.meet(&other.partition),
        }
    }

    /// Block of `x` as a mask.
    pub fn block_of(&self, x: usize) -> Mask {
        (0..self.partition.len())
            .filter(|&y| self.related(x, y))
            .fold(0, |m, y| m | bit(y))
    }

    pub fn label(&self) -> String {
        self.partition.label()
    }
}

pub fn is_compatible(s: &Semilattice, m: &OperatorMonoid, p: &Partition) -> bool {
    s.elements().all(|x| {
        let r = p.rep(x);
        s.elements().all(|t| p.related(s.join(x, t), s.join(r, t)))
            && m.elements().iter().all(|f| p.related(f.apply(x), f.apply(r)))
    })
}

/// Closes a union-find state under translations and operators. Checking
/// each element against its block representative is enough because every
/// closure map is unary.
fn close(s: &Semilattice, m: &OperatorMonoid, uf: &mut UnionFind) -> Partition {
    loop {
        let mut changed = false;
        for x in s.elements() {
            let r = uf.find(x);
            if r == x {
                continue;
            }
            for f in m.elements() {
                changed |= uf.union(f.apply(x), f.apply(r));
            }
            for t in s.elements() {
                changed |= uf.union(s.join(x, t), s.join(r, t));
            }
        }
        if !changed {
            return uf.partition();
        }
    }
}

/// Least congruence relating every listed pair.
pub fn generated_congruence(s: &Semilattice, m: &OperatorMonoid, pairs: &[(usize, usize)]) -> Congruence {
    let mut uf = UnionFind::new(s.size());
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    Congruence {
        partition: close(s, m, &mut uf),
    }
}

pub fn principal_congruence(s: &Semilattice, m: &OperatorMonoid, a: usize, b: usize) -> Congruence {
    generated_congruence(s, m, &[(a, b)])
}

/// Transitive closure of the union, re-closed under compatibility.
pub fn congruence_join(s: &Semilattice, m: &OperatorMonoid, a: &Congruence, b: &Congruence) -> Congruence {
    let mut uf = UnionFind::from_partition(&a.partition.join(&b.partition));
    Congruence {
        partition: close(s, m, &mut uf),
    }
}

/// Congruences of `(S, +, 0, M)` with their lattice. Elements are sorted by
/// the number of related pairs, then by representative map, so index 0 is Δ.
#[derive(Debug, Clone)]
pub struct CongruenceLattice {
    pub elements: Vec<Congruence>,
    pub lattice: FiniteLattice,
}

impl CongruenceLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, c: &Congruence) -> Option<usize> {
        self.elements.iter().position(|e| e == c)
    }
}

/// {Δ} together with the join-closure of all principal congruences.
pub fn congruence_lattice(s: &Semilattice, m: &OperatorMonoid) -> CongruenceLattice {
    let mut set: BTreeSet<Congruence> = BTreeSet::new();
    set.insert(Congruence::identity(s.size()));
    let principals: BTreeSet<Congruence> = s
        .strict_pairs()
        .into_iter()
        .map(|(a, b)| principal_congruence(s, m, a, b))
        .collect();
    let mut frontier: Vec<Congruence> = principals.iter().cloned().collect();
    set.extend(principals.iter().cloned());
    while let Some(c) = frontier.pop() {
        for p in &principals {
            let j = congruence_join(s, m, &c, p);
            if set.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    let mut elements: Vec<Congruence> = set.into_iter().collect();
    elements.sort_by(|a, b| {
        a.partition
            .pair_count()
            .cmp(&b.partition.pair_count())
            .then_with(|| a.cmp(b))
    });
    let lattice = FiniteLattice::from_order(elements.iter().map(|c| c.label()).collect(), |a, b| {
        elements[a].leq(&elements[b])
    })
    .expect("congruences form a lattice");
    CongruenceLattice { elements, lattice }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{Operator, DEFAULT_CLOSURE_BOUND};
    use crate::partition::all_partitions;

    fn diamond() -> Semilattice {
        Semilattice::from_order(4, |x, y| x == y || x == 0 || y == 3).unwrap()
    }

    fn swap(s: &Semilattice) -> OperatorMonoid {
        let sigma = Operator::new(s, vec![0, 2, 1, 3]).unwrap();
        OperatorMonoid::generate(s, &[("sigma".into(), sigma)], DEFAULT_CLOSURE_BOUND).unwrap()
    }

    /// Oracle: scan every partition for compatibility.
    fn brute_force(s: &Semilattice, m: &OperatorMonoid) -> Vec<Partition> {
        all_partitions(s.size())
            .into_iter()
            .filter(|p| is_compatible(s, m, p))
            .collect()
    }

    #[test]
    fn principal_identity_case() {
        let s = diamond();
        let m = OperatorMonoid::trivial(&s);
        assert!(principal_congruence(&s, &m, 1, 1).partition().is_discrete());
    }

    #[test]
    fn chain_principal() {
        let s = Semilattice::chain(3);
        let m = OperatorMonoid::trivial(&s);
        assert_eq!(principal_congruence(&s, &m, 0, 1).label(), "0,1|2");
    }

    #[test]
    fn swap_forces_full() {
        let s = diamond();
        let m = swap(&s);
        assert!(principal_congruence(&s, &m, 0, 1).partition().is_full());
    }

    #[test]
    fn chain_lattice_is_square() {
        let s = Semilattice::chain(3);
        let m = OperatorMonoid::trivial(&s);
        let con = congruence_lattice(&s, &m);
        let labels: Vec<String> = con.elements.iter().map(|c| c.label()).collect();
        assert_eq!(labels, ["0|1|2", "0,1|2", "0|1,2", "0,1,2"]);
        assert_eq!(brute_force(&s, &m).len(), 4);
        assert!(con.lattice.properties().coatomistic);
    }

    #[test]
    fn diamond_with_swap_is_three_chain() {
        let s = diamond();
        let m = swap(&s);
        let con = congruence_lattice(&s, &m);
        let labels: Vec<String> = con.elements.iter().map(|c| c.label()).collect();
        assert_eq!(labels, ["0|1|2|3", "0|1,2,3", "0,1,2,3"]);
        assert_eq!(brute_force(&s, &m).len(), 3);
    }

    #[test]
    fn one_element() {
        let s = Semilattice::chain(1);
        let m = OperatorMonoid::trivial(&s);
        assert_eq!(congruence_lattice(&s, &m).len(), 1);
    }

    #[test]
    fn matches_brute_force_on_small_chains() {
        for n in 1..=5 {
            let s = Semilattice::chain(n);
            let m = OperatorMonoid::trivial(&s);
            let mut fast: Vec<Partition> = congruence_lattice(&s, &m)
                .elements
                .into_iter()
                .map(|c| c.partition)
                .collect();
            let mut slow = brute_force(&s, &m);
            fast.sort();
            slow.sort();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn join_two_ways() {
        let s = diamond();
        let m = OperatorMonoid::trivial(&s);
        let con = congruence_lattice(&s, &m);
        for a in 0..con.len() {
            for b in 0..con.len() {
                let direct = congruence_join(&s, &m, &con.elements[a], &con.elements[b]);
                let via_lattice = &con.elements[con.lattice.join(a, b)];
                assert_eq!(&direct, via_lattice);
                let meet = con.elements[a].meet(&con.elements[b]);
                assert_eq!(&meet, &con.elements[con.lattice.meet(a, b)]);
            }
        }
    }
}
