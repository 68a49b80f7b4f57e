//! Finite join-semilattices with 0.
//!
//! Carrier elements are indices `0..n`. The least element always sits at
//! index 0; an input whose zero is some other index `z` is relabelled by the
//! transposition `0 <-> z`. Subsets of the carrier are `u64` bitmasks, which
//! caps carriers at [`MAX_CARRIER`] elements.

use crate::error::{Error, Result};

/// Subset of a carrier: bit `i` set iff element `i` is a member.
pub type Mask = u64;

/// Largest carrier a [`Mask`] can index.
pub const MAX_CARRIER: usize = 64;

#[inline]
pub fn bit(i: usize) -> Mask {
    1u64 << i
}

#[inline]
pub fn has(mask: Mask, i: usize) -> bool {
    mask >> i & 1 == 1
}

/// Iterates the members of a mask in ascending order.
pub fn members(mask: Mask) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Semilattice {
    size: usize,
    join: Vec<usize>,
    top: usize,
    input_zero: usize,
}

impl Semilattice {
    /// Checks the semilattice axioms on a row-major join table and returns
    /// the normalized semilattice. Errors name the first violated axiom using
    /// input indices.
    pub fn validate(size: usize, join: &[usize], zero: usize) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidSemilattice(msg));
        if size == 0 {
            return bad("empty carrier".into());
        }
        if size > MAX_CARRIER {
            return bad(format!("carrier of {size} elements exceeds {MAX_CARRIER}"));
        }
        if join.len() != size * size {
            return bad(format!(
                "join table has {} entries, expected {}",
                join.len(),
                size * size
            ));
        }
        if let Some(&v) = join.iter().find(|&&v| v >= size) {
            return bad(format!("join table entry {v} out of range"));
        }
        if zero >= size {
            return bad(format!("zero index {zero} out of range"));
        }
        let j = |a: usize, b: usize| join[a * size + b];
        for a in 0..size {
            if j(a, a) != a {
                return bad(format!("not idempotent at ({a})"));
            }
        }
        for a in 0..size {
            for b in a + 1..size {
                if j(a, b) != j(b, a) {
                    return bad(format!("not commutative at ({a},{b})"));
                }
            }
        }
        for x in 0..size {
            if j(zero, x) != x {
                return bad(format!("wrong zero: join({zero},{x}) != {x}"));
            }
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if j(j(a, b), c) != j(a, j(b, c)) {
                        return bad(format!("not associative at ({a},{b},{c})"));
                    }
                }
            }
        }

        let swap = |i: usize| {
            if i == zero {
                0
            } else if i == 0 {
                zero
            } else {
                i
            }
        };
        let mut table = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                table[swap(a) * size + swap(b)] = swap(j(a, b));
            }
        }
        let top = (0..size).fold(0, |acc, x| table[acc * size + x]);
        Ok(Semilattice {
            size,
            join: table,
            top,
            input_zero: zero,
        })
    }

    /// The chain `0 < 1 < ... < n-1` with join = max.
    pub fn chain(n: usize) -> Self {
        let join: Vec<usize> = (0..n * n).map(|k| (k / n).max(k % n)).collect();
        Self::validate(n, &join, 0).expect("chain is a semilattice")
    }

    /// Builds a semilattice from an order relation given as a predicate on
    /// indices. Index 0 must be the least element and every pair must have a
    /// least upper bound.
    pub fn from_order(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut join = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                let uppers: Vec<usize> = (0..size).filter(|&u| leq(a, u) && leq(b, u)).collect();
                let least = uppers
                    .iter()
                    .copied()
                    .find(|&u| uppers.iter().all(|&v| leq(u, v)))
                    .ok_or_else(|| {
                        Error::InvalidSemilattice(format!("no least upper bound for ({a},{b})"))
                    })?;
                join[a * size + b] = least;
            }
        }
        Self::validate(size, &join, 0)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    /// Row-major join table over canonical indices.
    pub fn join_table(&self) -> &[usize] {
        &self.join
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.join(a, b) == b
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// Canonical index of an element given by its index in the input table.
    pub fn from_input_index(&self, i: usize) -> usize {
        if i == self.input_zero {
            0
        } else if i == 0 {
            self.input_zero
        } else {
            i
        }
    }

    pub fn full_mask(&self) -> Mask {
        if self.size == MAX_CARRIER {
            u64::MAX
        } else {
            bit(self.size) - 1
        }
    }

    pub fn down_set(&self, s: usize) -> Mask {
        self.elements()
            .filter(|&x| self.leq(x, s))
            .fold(0, |m, x| m | bit(x))
    }

    pub fn up_set(&self, s: usize) -> Mask {
        self.elements()
            .filter(|&x| self.leq(s, x))
            .fold(0, |m, x| m | bit(x))
    }

    /// Join of all members; 0 for the empty set.
    pub fn join_all(&self, mask: Mask) -> usize {
        members(mask).fold(0, |acc, x| self.join(acc, x))
    }

    /// Pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_ideal(&self, mask: Mask) -> bool {
        if !has(mask, 0) {
            return false;
        }
        members(mask).all(|x| {
            self.down_set(x) & !mask == 0 && members(mask).all(|y| has(mask, self.join(x, y)))
        })
    }

    /// All ideals, sorted by membership bitmask. On a finite carrier every
    /// ideal is principal, so there is exactly one per element.
    pub fn ideals(&self) -> Vec<Ideal> {
        let mut out: Vec<Ideal> = self
            .elements()
            .map(|s| Ideal {
                members: self.down_set(s),
            })
            .collect();
        out.sort();
        out
    }
}

/// Downward-closed, join-closed subset containing 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ideal {
    pub members: Mask,
}

impl Ideal {
    pub fn contains(&self, x: usize) -> bool {
        has(self.members, x)
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.members & !other.members == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        members(self.members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn diamond() -> Semilattice {
        // 0, a=1, b=2, 1=3
        Semilattice::from_order(4, |x, y| x == y || x == 0 || y == 3).unwrap()
    }

    #[test]
    fn one_element() {
        let s = Semilattice::validate(1, &[0], 0).unwrap();
        assert_eq!(s.top(), 0);
        assert_eq!(s.ideals().len(), 1);
    }

    #[test]
    fn three_chain() {
        let s = Semilattice::chain(3);
        assert_eq!(s.top(), 2);
        let ideals: Vec<Mask> = s.ideals().iter().map(|i| i.members).collect();
        assert_eq!(ideals, vec![0b001, 0b011, 0b111]);
    }

    #[test]
    fn diamond_ideals() {
        let s = diamond();
        let ideals: Vec<Mask> = s.ideals().iter().map(|i| i.members).collect();
        assert_eq!(ideals, vec![0b0001, 0b0011, 0b0101, 0b1111]);
        assert!(!s.is_ideal(0b0111));
    }

    #[test]
    fn ideals_match_brute_force() {
        let s = diamond();
        let brute: Vec<Mask> = (0..=s.full_mask()).filter(|&m| s.is_ideal(m)).collect();
        let fast: Vec<Mask> = s.ideals().iter().map(|i| i.members).collect();
        assert_eq!(brute, fast);
    }

    #[test]
    fn rejects_non_commutative() {
        // 3-chain with join(1,2) corrupted
        let mut t = Semilattice::chain(3).join_table().to_vec();
        t[1 * 3 + 2] = 1;
        let err = Semilattice::validate(3, &t, 0).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidSemilattice("not commutative at (1,2)".into())
        );
    }

    #[test]
    fn rejects_wrong_zero() {
        let t = Semilattice::chain(3).join_table().to_vec();
        let err = Semilattice::validate(3, &t, 1).unwrap_err();
        assert!(err.to_string().contains("wrong zero"));
    }

    #[test]
    fn rejects_non_idempotent() {
        let mut t = Semilattice::chain(2).join_table().to_vec();
        t[0] = 1;
        let err = Semilattice::validate(2, &t, 0).unwrap_err();
        assert!(err.to_string().contains("not idempotent at (0)"));
    }

    #[test]
    fn zero_is_normalized() {
        // chain written as 2 < 1 < 0
        let n = 3;
        let join: Vec<usize> = (0..9).map(|k| (k / n).min(k % n)).collect();
        let s = Semilattice::validate(3, &join, 2).unwrap();
        assert_eq!(s.from_input_index(2), 0);
        assert_eq!(s.from_input_index(0), 2);
        assert_eq!(s.top(), 2);
        assert!(s.leq(1, 2));
    }

    #[test]
    fn antisymmetry_exhaustive() {
        for s in [Semilattice::chain(4), diamond()] {
            for a in s.elements() {
                for b in s.elements() {
                    if s.leq(a, b) && s.leq(b, a) {
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }
}
