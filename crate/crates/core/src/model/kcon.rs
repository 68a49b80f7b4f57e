//! K-congruences of a finite structure, the semilattice they form and the
//! operators induced on it by endomorphisms.

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::monoid::Operator;
use crate::partition::{all_partitions, Partition};
use crate::semilattice::{bit, has, members, Mask, Semilattice};

use super::structure::{first_failure, CompiledLaw, FiniteStructure, ModelSearch};

/// Pair `⟨θ0, θ1⟩`: a compatible equivalence and saturated predicate
/// extensions containing the structure's own.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructureCongruence {
    pub theta0: Partition,
    pub theta1: Vec<Mask>,
}

impl StructureCongruence {
    pub fn leq(&self, other: &StructureCongruence) -> bool {
        self.theta0.refines(&other.theta0) && self.theta1.iter().zip(&other.theta1).all(|(a, b)| a & !b == 0)
    }

    pub fn meet(&self, other: &StructureCongruence) -> StructureCongruence {
        StructureCongruence {
            theta0: self.theta0.meet(&other.theta0),
            theta1: self.theta1.iter().zip(&other.theta1).map(|(a, b)| a & b).collect(),
        }
    }

    fn weight(&self) -> usize {
        self.theta0.pair_count() + self.theta1.iter().map(|m| m.count_ones() as usize).sum::<usize>()
    }

    pub fn contains(&self, g: &Generator) -> bool {
        match *g {
            Generator::Pair(a, b) => self.theta0.related(a, b),
            Generator::Atom(p, x) => has(self.theta1[p], x),
        }
    }

    pub fn label(&self, a: &FiniteStructure) -> String {
        let preds: Vec<String> = a
            .signature
            .predicates
            .iter()
            .zip(&self.theta1)
            .filter(|(_, &m)| m != 0)
            .map(|(p, &m)| {
                let ext: Vec<&str> = members(m).map(|x| a.labels[x].as_str()).collect();
                format!("{p}{{{}}}", ext.join(","))
            })
            .collect();
        format!("<{};{}>", self.theta0.label(), preds.join(" "))
    }
}

/// Atomic formula over carrier elements: `a ≈ b` or `P(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Pair(usize, usize),
    Atom(usize, usize),
}

impl Generator {
    pub fn map(self, eps: &[usize]) -> Generator {
        match self {
            Generator::Pair(a, b) => Generator::Pair(eps[a], eps[b]),
            Generator::Atom(p, x) => Generator::Atom(p, eps[x]),
        }
    }
}

/// All K-congruences of a finite structure as a join-semilattice.
#[derive(Debug, Clone)]
pub struct CompactConSemilattice {
    pub structure: FiniteStructure,
    pub elements: Vec<StructureCongruence>,
    pub semilattice: Semilattice,
}

/// Enumerates `θ0` over operation-compatible partitions, then `θ1` by
/// model search on the quotient with the base predicates forced.
pub fn k_congruences(a: &FiniteStructure, laws: &[CompiledLaw]) -> Result<CompactConSemilattice> {
    let mut elements = Vec::new();
    for theta0 in all_partitions(a.size()) {
        if !a.is_compatible(&theta0) {
            continue;
        }
        let base = a.quotient(&theta0, &a.preds);
        let blocks = theta0.blocks();
        let mut search = ModelSearch::new(&base.signature, laws, base.size(), base.consts.clone())
            .with_labels(base.labels.clone());
        for (f, t) in base.funcs.iter().enumerate() {
            search.fix_function(f, t);
        }
        for (p, &m) in base.preds.iter().enumerate() {
            for x in members(m) {
                search.fix_predicate(p, x, true);
            }
        }
        search.run(|q| {
            let theta1 = q
                .preds
                .iter()
                .map(|&m| members(m).flat_map(|b| blocks[b].iter().copied()).fold(0, |acc, x| acc | bit(x)))
                .collect();
            elements.push(StructureCongruence {
                theta0: theta0.clone(),
                theta1,
            });
            true
        });
    }
    if elements.is_empty() {
        return Err(Error::ClosureFailure("structure has no K-congruences".into()));
    }
    elements.sort_by(|x, y| x.weight().cmp(&y.weight()).then_with(|| x.cmp(y)));
    if let Some(bad) = elements.iter().find(|e| !elements[0].leq(e)) {
        return Err(Error::ClosureFailure(format!(
            "no least K-congruence: {} and {} are incomparable",
            elements[0].label(a),
            bad.label(a)
        )));
    }
    let n = elements.len();
    let mut table = vec![0; n * n];
    for i in 0..n {
        for j in i..n {
            let k = least_above(&elements, |e| elements[i].leq(e) && elements[j].leq(e)).ok_or_else(|| {
                Error::ClosureFailure(format!(
                    "K-congruences not closed under intersection above {} and {}",
                    elements[i].label(a),
                    elements[j].label(a)
                ))
            })?;
            table[i * n + j] = k;
            table[j * n + i] = k;
        }
    }
    let semilattice = Semilattice::validate(n, &table, 0)?;
    Ok(CompactConSemilattice {
        structure: a.clone(),
        elements,
        semilattice,
    })
}

/// Intersection of the elements satisfying `above`, if it is itself one.
fn least_above(elements: &[StructureCongruence], above: impl Fn(&StructureCongruence) -> bool) -> Option<usize> {
    let meet = elements.iter().filter(|e| above(e)).cloned().reduce(|x, y| x.meet(&y))?;
    elements.iter().position(|e| *e == meet)
}

impl CompactConSemilattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.semilattice.join(a, b)
    }

    pub fn index_of(&self, c: &StructureCongruence) -> Option<usize> {
        self.elements.iter().position(|e| e == c)
    }

    pub fn label(&self, i: usize) -> String {
        self.elements[i].label(&self.structure)
    }

    /// `con_K` of a set of atomic formulae.
    pub fn generated(&self, gens: &[Generator]) -> Result<usize> {
        least_above(&self.elements, |e| gens.iter().all(|g| e.contains(g)))
            .ok_or_else(|| Error::ClosureFailure(format!("no K-congruence contains {gens:?}")))
    }

    /// Pairs of `θ0` outside Δ and atoms of `θ1` outside the base.
    pub fn canonical_generators(&self, i: usize) -> Vec<Generator> {
        let e = &self.elements[i];
        let n = self.structure.size();
        let mut out = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                if e.theta0.related(x, y) {
                    out.push(Generator::Pair(x, y));
                }
            }
        }
        for (p, (&m, &base)) in e.theta1.iter().zip(&self.structure.preds).enumerate() {
            out.extend(members(m & !base).map(|x| Generator::Atom(p, x)));
        }
        out
    }

    /// Pairs to block representatives and atoms at representatives only.
    pub fn representative_generators(&self, i: usize) -> Vec<Generator> {
        let e = &self.elements[i];
        let mut out = Vec::new();
        for x in 0..self.structure.size() {
            let r = e.theta0.rep(x);
            if r != x {
                out.push(Generator::Pair(r, x));
            }
        }
        for (p, (&m, &base)) in e.theta1.iter().zip(&self.structure.preds).enumerate() {
            for r in members(m) {
                if e.theta0.rep(r) == r && !has(base, r) {
                    out.push(Generator::Atom(p, r));
                }
            }
        }
        out
    }

    /// `ε̂` as an image table, computed from both generator sets, which must
    /// agree.
    pub fn induced_images(&self, eps: &[usize]) -> Result<Vec<usize>> {
        (0..self.len())
            .map(|i| {
                let image = |gens: Vec<Generator>| -> Result<usize> {
                    let mapped: Vec<Generator> = gens.into_iter().map(|g| g.map(eps)).collect();
                    self.generated(&mapped)
                };
                let a = image(self.canonical_generators(i))?;
                let b = image(self.representative_generators(i))?;
                if a != b {
                    return Err(Error::ClosureFailure(format!(
                        "induced operator depends on generators at {}: {} vs {}",
                        self.label(i),
                        self.label(a),
                        self.label(b)
                    )));
                }
                Ok(a)
            })
            .collect()
    }

    /// `ε̂` checked to preserve joins and the zero.
    pub fn induced_operator(&self, eps: &[usize]) -> Result<Operator> {
        if !self.structure.is_endomorphism(eps) {
            return Err(Error::UnexpectedEndomorphism(format!("{eps:?} is not an endomorphism")));
        }
        Operator::new(&self.semilattice, self.induced_images(eps)?)
    }

    pub fn lattice(&self) -> FiniteLattice {
        let labels = (0..self.len()).map(|i| self.label(i)).collect();
        FiniteLattice::from_order(labels, |a, b| self.elements[a].leq(&self.elements[b]))
            .expect("finite join-semilattice with zero is a lattice")
    }

    /// Least K-congruence with `θ0 = ∇`.
    pub fn upsilon(&self, laws: &[CompiledLaw]) -> Result<usize> {
        let n = self.structure.size();
        match least_above(&self.elements, |e| e.theta0.is_full()) {
            Some(u) => Ok(u),
            None => {
                let full = Partition::full(n);
                let sat: Vec<Mask> = self
                    .structure
                    .preds
                    .iter()
                    .map(|&m| if m != 0 { (0..n).fold(0, |a, x| a | bit(x)) } else { 0 })
                    .collect();
                let q = self.structure.quotient(&full, &sat);
                let law = first_failure(&q, laws)
                    .map(|l| l.source.to_string())
                    .unwrap_or_else(|| "none".into());
                Err(Error::NoUpsilon(law))
            }
        }
    }
}

/// Largest carrier scanned by [`endomorphisms`].
pub const ENDOMORPHISM_SCAN_BOUND: usize = 7;

/// Every endomorphism, by scanning all self-maps in lexicographic order.
pub fn endomorphisms(a: &FiniteStructure) -> Result<Vec<Vec<usize>>> {
    let n = a.size();
    if n > ENDOMORPHISM_SCAN_BOUND {
        return Err(Error::CarrierTooLarge {
            size: n,
            bound: ENDOMORPHISM_SCAN_BOUND,
        });
    }
    let mut map = vec![0; n];
    let mut out = Vec::new();
    loop {
        if a.is_endomorphism(&map) {
            out.push(map.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            map[k] += 1;
            if map[k] < n {
                break;
            }
            map[k] = 0;
        }
    }
}

/// First `(θ, ε)` with `ε̂(θ) ∨ Υ ≠ θ ∨ Υ`.
pub fn pseudo_lemma_failure(t: &CompactConSemilattice, ops: &[(String, Operator)], upsilon: usize) -> Option<String> {
    for (name, op) in ops {
        for theta in 0..t.len() {
            let lhs = t.join(op.apply(theta), upsilon);
            let rhs = t.join(theta, upsilon);
            if lhs != rhs {
                return Some(format!("theta={} eps={name}", t.label(theta)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::structure::{compile_all, Signature};
    use crate::presentation::{Presentation, Style};

    fn sig() -> Signature {
        Signature {
            predicates: vec!["A".into()],
            functions: vec!["f".into()],
            constants: vec!["w".into()],
        }
    }

    fn structure() -> FiniteStructure {
        // x, f(x), w with f an involution on {x, f(x)}
        FiniteStructure::new(
            sig(),
            vec!["x".into(), "f(x)".into(), "w".into()],
            vec![vec![1, 0, 2]],
            vec![2],
            vec![0b100],
        )
        .unwrap()
    }

    fn laws(text: &str) -> Vec<CompiledLaw> {
        let s = sig();
        let p = Presentation::new(Style::Fixture, s.predicates.clone(), s.functions.clone(), s.constants.clone());
        compile_all(&p.parse_laws(text).unwrap(), &s).unwrap()
    }

    /// Oracle: every compatible partition with every saturated superset of
    /// the base predicates whose quotient satisfies the laws.
    fn brute_force(a: &FiniteStructure, laws: &[CompiledLaw]) -> Vec<StructureCongruence> {
        let mut out = Vec::new();
        for p in all_partitions(a.size()) {
            if !a.is_compatible(&p) {
                continue;
            }
            for m in 0..1u64 << a.size() {
                let saturated = (0..a.size()).all(|x| has(m, x) == has(m, p.rep(x)));
                if m & a.preds[0] != a.preds[0] || !saturated {
                    continue;
                }
                let q = a.quotient(&p, &[m]);
                if laws.iter().all(|l| l.holds_in(&q)) {
                    out.push(StructureCongruence {
                        theta0: p.clone(),
                        theta1: vec![m],
                    });
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn matches_oracle() {
        for text in ["", "A(x) -> A(f(x))", "A(x) -> x = w\nf(x) = f(y) -> x = y", "f(x) = x -> x = w"] {
            let a = structure();
            let l = laws(text);
            let t = k_congruences(&a, &l).unwrap();
            let mut got = t.elements.clone();
            got.sort();
            assert_eq!(got, brute_force(&a, &l), "laws {text:?}");
        }
    }

    #[test]
    fn induced_identity_and_constant() {
        let a = structure();
        let l = laws("A(x) -> A(f(x))");
        let t = k_congruences(&a, &l).unwrap();
        let id = t.induced_operator(&[0, 1, 2]).unwrap();
        assert!(id.is_identity());
        let constant = t.induced_operator(&[2, 2, 2]).unwrap();
        assert!((0..t.len()).all(|i| constant.apply(i) == 0));
        assert!(t.induced_operator(&[0, 0, 2]).is_err());
    }

    #[test]
    fn endomorphisms_of_involution() {
        let maps = endomorphisms(&structure()).unwrap();
        assert_eq!(maps, vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 2]]);
    }

    #[test]
    fn upsilon_is_full_block() {
        let a = structure();
        let l = laws("A(x) -> A(f(x))");
        let t = k_congruences(&a, &l).unwrap();
        let u = t.upsilon(&l).unwrap();
        assert!(t.elements[u].theta0.is_full());
        assert!(t.elements.iter().filter(|e| e.theta0.is_full()).all(|e| t.elements[u].leq(e)));
    }
}
