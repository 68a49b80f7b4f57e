//! Operators ((+,0)-endomorphisms) and finite monoids of them.
//!
//! Composition is written `(h∘g)(x) = h(g(x))` throughout. Elements of a
//! closed monoid are named by generator words read the same way: the element
//! `f_g` is `f∘g`, i.e. apply `g` first. The identity is always element 0 and
//! is named `i`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::semilattice::Semilattice;

pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;
pub const IDENTITY_NAME: &str = "i";

/// A (+,0)-endomorphism, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Operator {
    images: Vec<usize>,
}

impl Operator {
    pub fn new(s: &Semilattice, images: Vec<usize>) -> Result<Self> {
        let fail = |m: String| Err(Error::NotAnOperator(m));
        if images.len() != s.size() {
            return fail(format!(
                "{} images for a carrier of {}",
                images.len(),
                s.size()
            ));
        }
        if let Some(&v) = images.iter().find(|&&v| v >= s.size()) {
            return fail(format!("image {v} out of range"));
        }
        if images[0] != 0 {
            return fail(format!("f(0) = {} != 0", images[0]));
        }
        for x in s.elements() {
            for y in s.elements() {
                if images[s.join(x, y)] != s.join(images[x], images[y]) {
                    return fail(format!("f({x}+{y}) != f({x})+f({y})"));
                }
            }
        }
        Ok(Operator { images })
    }

    pub fn identity(n: usize) -> Self {
        Operator {
            images: (0..n).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &Operator) -> Operator {
        Operator {
            images: inner.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MonoidFlags {
    pub reductive: bool,
    pub right_cancellative: bool,
    pub is_group: bool,
    pub fixes_top: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorMonoid {
    elements: Vec<Operator>,
    names: Vec<String>,
    /// `compose[f * m + g]` is the index of `f∘g`.
    compose: Vec<usize>,
    flags: MonoidFlags,
}

impl OperatorMonoid {
    pub fn trivial(s: &Semilattice) -> Self {
        Self::generate(s, &[], DEFAULT_CLOSURE_BOUND).expect("trivial monoid")
    }

    /// Smallest composition-closed set containing the identity and the named
    /// generators. Fails once more than `bound` elements have been produced.
    pub fn generate(s: &Semilattice, generators: &[(String, Operator)], bound: usize) -> Result<Self> {
        for (name, g) in generators {
            if g.images.len() != s.size() {
                return Err(Error::NotAnOperator(format!("{name}: wrong length")));
            }
            Operator::new(s, g.images.clone())
                .map_err(|e| Error::NotAnOperator(format!("{name}: {e}")))?;
        }
        let mut elements = vec![Operator::identity(s.size())];
        let mut names = vec![IDENTITY_NAME.to_string()];
        let mut index: HashMap<Operator, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut next = 0;
        while next < elements.len() {
            for (gname, g) in generators {
                let composite = g.after(&elements[next]);
                if index.contains_key(&composite) {
                    continue;
                }
                if elements.len() >= bound {
                    return Err(Error::ClosureBoundExceeded(bound));
                }
                let name = if next == 0 {
                    gname.clone()
                } else {
                    format!("{gname}_{}", names[next])
                };
                index.insert(composite.clone(), elements.len());
                elements.push(composite);
                names.push(name);
            }
            next += 1;
        }
        let m = elements.len();
        let mut compose = vec![0; m * m];
        for f in 0..m {
            for g in 0..m {
                compose[f * m + g] = index[&elements[f].after(&elements[g])];
            }
        }
        let mut monoid = OperatorMonoid {
            elements,
            names,
            compose,
            flags: MonoidFlags::default(),
        };
        monoid.flags = monoid.compute_flags(s);
        Ok(monoid)
    }

    /// Closure of unnamed generators; generator `k` is named `g{k+1}`.
    pub fn closure(s: &Semilattice, generators: &[Operator], bound: usize) -> Result<Self> {
        let named: Vec<(String, Operator)> = generators
            .iter()
            .enumerate()
            .map(|(k, g)| (format!("g{}", k + 1), g.clone()))
            .collect();
        Self::generate(s, &named, bound)
    }

    fn compute_flags(&self, s: &Semilattice) -> MonoidFlags {
        let m = self.len();
        let c = |f: usize, g: usize| self.compose[f * m + g];
        let reductive = (0..m).all(|f| {
            (0..m).all(|g| (0..m).any(|h| c(h, g) == f || c(h, f) == g))
        });
        let right_cancellative = (0..m).all(|f| {
            (0..m).all(|g| (0..m).all(|h| g == h || c(g, f) != c(h, f)))
        });
        let is_group = (0..m).all(|f| (0..m).any(|g| c(f, g) == 0 && c(g, f) == 0));
        let top = s.top();
        let fixes_top = self.elements.iter().all(|f| f.apply(top) == top);
        MonoidFlags {
            reductive,
            right_cancellative,
            is_group,
            fixes_top,
        }
    }

    /// Property flags, recomputed from their definitions.
    pub fn properties(&self, s: &Semilattice) -> MonoidFlags {
        self.compute_flags(s)
    }

    pub fn flags(&self) -> MonoidFlags {
        self.flags
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    pub fn element(&self, f: usize) -> &Operator {
        &self.elements[f]
    }

    pub fn name(&self, f: usize) -> &str {
        &self.names[f]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of `f∘g`.
    #[inline]
    pub fn compose(&self, f: usize, g: usize) -> usize {
        self.compose[f * self.len() + g]
    }

    pub fn index_of(&self, op: &Operator) -> Option<usize> {
        self.elements.iter().position(|e| e == op)
    }

    /// Non-identity elements with their names, usable as generators.
    pub fn named_elements(&self) -> Vec<(String, Operator)> {
        (1..self.len())
            .map(|f| (self.names[f].clone(), self.elements[f].clone()))
            .collect()
    }

    pub fn contains_all(&self, other: &OperatorMonoid) -> bool {
        other.elements.iter().all(|e| self.index_of(e).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Semilattice {
        Semilattice::from_order(4, |x, y| x == y || x == 0 || y == 3).unwrap()
    }

    #[test]
    fn empty_generators_give_identity() {
        let s = Semilattice::chain(3);
        let m = OperatorMonoid::closure(&s, &[], DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(m.len(), 1);
        let f = m.flags();
        assert!(f.is_group && f.reductive && f.right_cancellative && f.fixes_top);
    }

    #[test]
    fn swap_on_diamond() {
        let s = diamond();
        let swap = Operator::new(&s, vec![0, 2, 1, 3]).unwrap();
        let m = OperatorMonoid::generate(&s, &[("sigma".into(), swap)], 100).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.names(), ["i", "sigma"]);
        let f = m.flags();
        assert!(f.is_group && f.reductive && f.right_cancellative && f.fixes_top);
    }

    #[test]
    fn idempotent_on_chain_is_not_right_cancellative() {
        let s = Semilattice::chain(3);
        let f = Operator::new(&s, vec![0, 0, 2]).unwrap();
        let m = OperatorMonoid::closure(&s, &[f.clone()], 100).unwrap();
        assert_eq!(m.len(), 2);
        // witness: id∘f = f∘f with id != f
        let fi = m.index_of(&f).unwrap();
        assert_eq!(m.compose(0, fi), m.compose(fi, fi));
        assert!(!m.flags().right_cancellative);
        assert!(!m.flags().is_group);
        assert!(m.flags().reductive);
        assert!(m.flags().fixes_top);
    }

    #[test]
    fn non_operator_rejected() {
        let s = diamond();
        // not join-preserving: f(a+b) = a but f(a)+f(b) = top
        let err = Operator::new(&s, vec![0, 1, 2, 1]).unwrap_err();
        assert!(matches!(err, Error::NotAnOperator(_)));
        let err = Operator::new(&s, vec![1, 1, 1, 1]).unwrap_err();
        assert!(err.to_string().contains("f(0)"));
    }

    #[test]
    fn bound_exceeded() {
        let s = Semilattice::chain(5);
        // shift down: generates 5 distinct maps
        let p = Operator::new(&s, vec![0, 0, 1, 2, 3]).unwrap();
        let err = OperatorMonoid::closure(&s, &[p], 3).unwrap_err();
        assert_eq!(err, Error::ClosureBoundExceeded(3));
    }

    #[test]
    fn closure_is_idempotent() {
        let s = Semilattice::chain(5);
        let p = Operator::new(&s, vec![0, 0, 1, 2, 3]).unwrap();
        let m = OperatorMonoid::closure(&s, &[p], 100).unwrap();
        let again = OperatorMonoid::generate(&s, &m.named_elements(), 100).unwrap();
        assert_eq!(again.len(), m.len());
        assert!(again.contains_all(&m) && m.contains_all(&again));
    }

    #[test]
    fn composite_names_read_as_composition() {
        let s = Semilattice::chain(4);
        let p = Operator::new(&s, vec![0, 0, 1, 2]).unwrap();
        let m = OperatorMonoid::generate(&s, &[("p".into(), p.clone())], 100).unwrap();
        let pp = m.names().iter().position(|n| n == "p_p").unwrap();
        assert_eq!(m.element(pp), &p.after(&p));
    }
}
