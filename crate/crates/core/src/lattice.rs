//! Finite lattices given by an order matrix, with the property checks the
//! representation arguments rely on.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    labels: Vec<String>,
    leq: Vec<bool>,
    join: Vec<usize>,
    meet: Vec<usize>,
}

/// Property record reported by [`FiniteLattice::properties`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeProperties {
    pub size: usize,
    pub sd_meet: bool,
    pub sd_join: bool,
    pub atomistic: bool,
    pub coatomistic: bool,
    pub lower_bounded: bool,
    pub upper_bounded: bool,
}

impl LatticeProperties {
    pub fn render(&self) -> String {
        format!(
            "size={}\nsd_meet={}\nsd_join={}\natomistic={}\ncoatomistic={}\nlower_bounded={}\nupper_bounded={}\n",
            self.size,
            self.sd_meet,
            self.sd_join,
            self.atomistic,
            self.coatomistic,
            self.lower_bounded,
            self.upper_bounded
        )
    }
}

impl FiniteLattice {
    /// Builds the lattice from an order predicate. Fails if the relation is
    /// not a partial order or some pair lacks a join or a meet.
    pub fn from_order(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::NotALattice("empty".into()));
        }
        let mut m = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                m[a * n + b] = leq(a, b);
            }
        }
        let at = |a: usize, b: usize| m[a * n + b];
        for a in 0..n {
            if !at(a, a) {
                return Err(Error::NotALattice(format!("not reflexive at {a}")));
            }
            for b in 0..n {
                if a != b && at(a, b) && at(b, a) {
                    return Err(Error::NotALattice(format!("not antisymmetric at ({a},{b})")));
                }
                for c in 0..n {
                    if at(a, b) && at(b, c) && !at(a, c) {
                        return Err(Error::NotALattice(format!("not transitive at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let ub: Vec<usize> = (0..n).filter(|&u| at(a, u) && at(b, u)).collect();
                join[a * n + b] = *ub
                    .iter()
                    .find(|&&u| ub.iter().all(|&v| at(u, v)))
                    .ok_or_else(|| Error::NotALattice(format!("no join of ({a},{b})")))?;
                let lb: Vec<usize> = (0..n).filter(|&l| at(l, a) && at(l, b)).collect();
                meet[a * n + b] = *lb
                    .iter()
                    .find(|&&l| lb.iter().all(|&v| at(v, l)))
                    .ok_or_else(|| Error::NotALattice(format!("no meet of ({a},{b})")))?;
            }
        }
        Ok(FiniteLattice {
            labels,
            leq: m,
            join,
            meet,
        })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size() + b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b]
    }

    pub fn bottom(&self) -> usize {
        (0..self.size()).fold(0, |acc, x| self.meet(acc, x))
    }

    pub fn top(&self) -> usize {
        (0..self.size()).fold(0, |acc, x| self.join(acc, x))
    }

    /// Least upper bound of the listed elements (bottom when empty).
    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }

    /// Order dual, with the same labels.
    pub fn dual(&self) -> FiniteLattice {
        let n = self.size();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self.leq(b, a);
            }
        }
        FiniteLattice {
            labels: self.labels.clone(),
            leq,
            join: self.meet.clone(),
            meet: self.join.clone(),
        }
    }

    /// Covering pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && self.leq(a, b)
                    && !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b))
                {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        self.covers()
            .into_iter()
            .filter(|&(_, u)| u == x)
            .map(|(l, _)| l)
            .collect()
    }

    pub fn atoms(&self) -> Vec<usize> {
        let b = self.bottom();
        self.covers()
            .into_iter()
            .filter(|&(l, _)| l == b)
            .map(|(_, u)| u)
            .collect()
    }

    pub fn coatoms(&self) -> Vec<usize> {
        self.dual().atoms()
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let covers = self.covers();
        (0..self.size())
            .filter(|&x| covers.iter().filter(|&&(_, u)| u == x).count() == 1)
            .collect()
    }

    pub fn is_sd_meet(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    let xy = self.meet(x, y);
                    xy != self.meet(x, z) || xy == self.meet(x, self.join(y, z))
                })
            })
        })
    }

    pub fn is_sd_join(&self) -> bool {
        self.dual().is_sd_meet()
    }

    pub fn is_atomistic(&self) -> bool {
        let atoms = self.atoms();
        (0..self.size()).all(|x| {
            self.join_all(atoms.iter().copied().filter(|&a| self.leq(a, x))) == x
        })
    }

    pub fn is_coatomistic(&self) -> bool {
        self.dual().is_atomistic()
    }

    /// Join-dependency relation on join-irreducibles: `p D q` iff `q`
    /// belongs to a minimal nontrivial join cover of `p`.
    pub fn dependency_relation(&self) -> Vec<(usize, usize)> {
        let ji = self.join_irreducibles();
        let k = ji.len();
        assert!(k < 26, "too many join-irreducibles for cover enumeration");
        // antichains of join-irreducibles, as masks over positions in `ji`
        let antichains: Vec<u32> = (1u32..1 << k)
            .filter(|&m| {
                (0..k).all(|i| {
                    m >> i & 1 == 0
                        || (0..k).all(|j| i == j || m >> j & 1 == 0 || !self.leq(ji[i], ji[j]))
                })
            })
            .collect();
        let refines = |b: u32, a: u32| {
            (0..k).all(|i| b >> i & 1 == 0 || (0..k).any(|j| a >> j & 1 == 1 && self.leq(ji[i], ji[j])))
        };
        let mut out = Vec::new();
        for &p in &ji {
            let covers: Vec<u32> = antichains
                .iter()
                .copied()
                .filter(|&a| {
                    let members = (0..k).filter(|&i| a >> i & 1 == 1).map(|i| ji[i]);
                    members.clone().all(|q| !self.leq(p, q))
                        && self.leq(p, self.join_all(members))
                })
                .collect();
            let mut targets: Vec<usize> = Vec::new();
            for &a in &covers {
                let minimal = covers.iter().all(|&b| b == a || !refines(b, a));
                if minimal {
                    targets.extend((0..k).filter(|&i| a >> i & 1 == 1).map(|i| ji[i]));
                }
            }
            targets.sort_unstable();
            targets.dedup();
            out.extend(targets.into_iter().map(|q| (p, q)));
        }
        out
    }

    /// No cycle in the join-dependency relation.
    pub fn is_lower_bounded(&self) -> bool {
        !has_cycle(self.size(), &self.dependency_relation())
    }

    pub fn is_upper_bounded(&self) -> bool {
        self.dual().is_lower_bounded()
    }

    pub fn properties(&self) -> LatticeProperties {
        LatticeProperties {
            size: self.size(),
            sd_meet: self.is_sd_meet(),
            sd_join: self.is_sd_join(),
            atomistic: self.is_atomistic(),
            coatomistic: self.is_coatomistic(),
            lower_bounded: self.is_lower_bounded(),
            upper_bounded: self.is_upper_bounded(),
        }
    }

    /// An order isomorphism `self -> other`, if one exists.
    pub fn isomorphism(&self, other: &FiniteLattice) -> Option<Vec<usize>> {
        let n = self.size();
        if n != other.size() {
            return None;
        }
        let signature = |l: &FiniteLattice, x: usize| {
            let below = (0..n).filter(|&y| l.leq(y, x)).count();
            let above = (0..n).filter(|&y| l.leq(x, y)).count();
            (below, above)
        };
        let sig_a: Vec<_> = (0..n).map(|x| signature(self, x)).collect();
        let sig_b: Vec<_> = (0..n).map(|x| signature(other, x)).collect();
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        // assign in order of increasing down-set size so constraints bite early
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| sig_a[x]);
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn search(
            depth: usize,
            order: &[usize],
            a: &FiniteLattice,
            b: &FiniteLattice,
            sig_a: &[(usize, usize)],
            sig_b: &[(usize, usize)],
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if depth == order.len() {
                return true;
            }
            let x = order[depth];
            for y in 0..b.size() {
                if used[y] || sig_a[x] != sig_b[y] {
                    continue;
                }
                let consistent = order[..depth].iter().all(|&z| {
                    a.leq(z, x) == b.leq(map[z], y) && a.leq(x, z) == b.leq(y, map[z])
                });
                if !consistent {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if search(depth + 1, order, a, b, sig_a, sig_b, map, used) {
                    return true;
                }
                used[y] = false;
                map[x] = usize::MAX;
            }
            false
        }
        if search(0, &order, self, other, &sig_a, &sig_b, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &FiniteLattice) -> bool {
        self.isomorphism(other).is_some()
    }

    /// `element <index> <label>` lines.
    pub fn render_elements(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "element {i} {l}");
        }
        out
    }

    /// `cover <lower-label> <upper-label>` lines.
    pub fn render_covers(&self) -> String {
        let mut out = String::new();
        for (l, u) in self.covers() {
            let _ = writeln!(out, "cover {} {}", self.labels[l], self.labels[u]);
        }
        out
    }

    /// Hasse diagram as a DOT digraph, edges pointing upward.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", l.replace('"', "\\\""));
        }
        for (l, u) in self.covers() {
            let _ = writeln!(out, "  n{l} -> n{u};");
        }
        out.push_str("}\n");
        out
    }
}

fn has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a == b {
            return true;
        }
        adj[a].push(b);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    fn visit(v: usize, adj: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &w in &adj[v] {
            if state[w] == 1 || (state[w] == 0 && visit(w, adj, state)) {
                return true;
            }
        }
        state[v] = 2;
        false
    }
    (0..n).any(|v| state[v] == 0 && visit(v, &adj, &mut state))
}

/// Lattice of a finite family ordered by a predicate, labelled by `label`.
pub fn lattice_of<T>(
    items: &[T],
    leq: impl Fn(&T, &T) -> bool,
    label: impl Fn(&T) -> String,
) -> Result<FiniteLattice> {
    FiniteLattice::from_order(items.iter().map(label).collect(), |a, b| {
        leq(&items[a], &items[b])
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> FiniteLattice {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in covers {
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i * n + k] && leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        FiniteLattice::from_order((0..n).map(|i| i.to_string()).collect(), |a, b| leq[a * n + b])
            .unwrap()
    }

    pub fn two_by_two() -> FiniteLattice {
        from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    pub fn m3() -> FiniteLattice {
        from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
    }

    pub fn n5() -> FiniteLattice {
        // 0 < 1 < 2 < 4, 0 < 3 < 4
        from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
    }

    /// Oracle for the D relation: `p D q` iff `p != q` and some `x` has
    /// `p <= q ∨ x` but `p </= q_* ∨ x`.
    fn d_by_witness(l: &FiniteLattice) -> Vec<(usize, usize)> {
        let ji = l.join_irreducibles();
        let mut out = Vec::new();
        for &p in &ji {
            for &q in &ji {
                if p == q {
                    continue;
                }
                let q_lower = l.lower_covers(q)[0];
                if (0..l.size()).any(|x| l.leq(p, l.join(q, x)) && !l.leq(p, l.join(q_lower, x))) {
                    out.push((p, q));
                }
            }
        }
        out
    }

    #[test]
    fn two_by_two_has_everything() {
        let p = two_by_two().properties();
        assert!(p.sd_meet && p.sd_join && p.atomistic && p.coatomistic);
        assert!(p.lower_bounded && p.upper_bounded);
    }

    #[test]
    fn m3_is_unbounded() {
        let p = m3().properties();
        assert!(!p.sd_meet && !p.sd_join);
        assert!(!p.lower_bounded && !p.upper_bounded);
        assert!(p.atomistic && p.coatomistic);
    }

    #[test]
    fn n5_is_bounded() {
        let p = n5().properties();
        assert!(p.lower_bounded && p.upper_bounded);
        assert!(!p.atomistic);
    }

    #[test]
    fn d_relation_agrees_with_witness_form() {
        for l in [two_by_two(), m3(), n5(), m3().dual(), n5().dual()] {
            let mut a = l.dependency_relation();
            let mut b = d_by_witness(&l);
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn isomorphism_detects_shape() {
        assert!(n5().is_isomorphic(&n5().dual()));
        assert!(!n5().is_isomorphic(&m3()));
        let chain = from_covers(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(!chain.is_isomorphic(&two_by_two()));
    }

    #[test]
    fn rejects_non_lattice() {
        // two maximal elements
        let r = FiniteLattice::from_order(vec!["0".into(), "a".into(), "b".into()], |x, y| {
            x == y || x == 0
        });
        assert!(matches!(r, Err(Error::NotALattice(_))));
    }

    #[test]
    fn cover_edges_render() {
        let l = from_covers(3, &[(0, 1), (1, 2)]);
        assert_eq!(l.render_covers(), "cover 0 1\ncover 1 2\n");
        assert!(l.to_dot("L").contains("n0 -> n1;"));
    }
}
