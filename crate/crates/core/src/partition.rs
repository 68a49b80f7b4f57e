//! Equivalence relations as least-representative maps.

/// `rep[x]` is the least element of the block of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rep: Vec<usize>,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Partition { rep: (0..n).collect() }
    }

    pub fn full(n: usize) -> Self {
        Partition { rep: vec![0; n] }
    }

    /// From any block labelling; relabelled to least representatives.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut first = std::collections::HashMap::new();
        let rep = labels
            .iter()
            .enumerate()
            .map(|(i, l)| *first.entry(*l).or_insert(i))
            .collect();
        Partition { rep }
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    #[inline]
    pub fn rep(&self, x: usize) -> usize {
        self.rep[x]
    }

    pub fn reps(&self) -> &[usize] {
        &self.rep
    }

    #[inline]
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.rep[x] == self.rep[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.rep.iter().enumerate().all(|(i, &r)| i == r)
    }

    pub fn is_full(&self) -> bool {
        self.rep.iter().all(|&r| r == 0)
    }

    pub fn block_count(&self) -> usize {
        self.rep.iter().enumerate().filter(|&(i, &r)| i == r).count()
    }

    /// Blocks in order of their representatives.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; self.len()];
        for (x, &r) in self.rep.iter().enumerate() {
            if index[r] == usize::MAX {
                index[r] = out.len();
                out.push(Vec::new());
            }
            out[index[r]].push(x);
        }
        out
    }

    /// Index of each element's block in [`Partition::blocks`] order.
    pub fn block_index(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.len()];
        let mut next = 0;
        for x in 0..self.len() {
            let r = self.rep[x];
            if idx[r] == usize::MAX {
                idx[r] = next;
                next += 1;
            }
            idx[x] = idx[r];
        }
        idx
    }

    pub fn refines(&self, other: &Partition) -> bool {
        (0..self.len()).all(|x| other.related(x, self.rep[x]))
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let labels: Vec<usize> = (0..self.len())
            .map(|x| self.rep[x] * self.len() + other.rep[x])
            .collect();
        Partition::from_labels(&labels)
    }

    /// Transitive closure of the union.
    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.len());
        for x in 0..self.len() {
            uf.union(x, self.rep[x]);
            uf.union(x, other.rep[x]);
        }
        uf.partition()
    }

    /// Number of related ordered pairs.
    pub fn pair_count(&self) -> usize {
        self.blocks().iter().map(|b| b.len() * b.len()).sum()
    }

    /// Compact label such as `0,1|2`.
    pub fn label(&self) -> String {
        self.blocks()
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Union-find with least-element roots.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn from_partition(p: &Partition) -> Self {
        UnionFind {
            parent: p.reps().to_vec(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// Returns true if two distinct blocks were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn partition(&mut self) -> Partition {
        let rep = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition { rep }
    }
}

/// All set partitions of `0..n` (restricted growth strings, lexicographic).
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Partition { rep: Vec::new() });
        return out;
    }
    let mut rgs = vec![0usize; n];
    loop {
        out.push(Partition::from_labels(&rgs));
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..=6).map(|n| all_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn join_and_meet() {
        let a = Partition::from_labels(&[0, 0, 1, 2]);
        let b = Partition::from_labels(&[0, 1, 1, 2]);
        assert_eq!(a.join(&b).label(), "0,1,2|3");
        assert_eq!(a.meet(&b).label(), "0|1|2|3");
        assert!(a.refines(&a.join(&b)));
        assert!(!a.refines(&b));
    }

    #[test]
    fn block_index_follows_blocks() {
        let p = Partition::from_labels(&[5, 3, 5, 3, 7]);
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1, 3], vec![4]]);
        assert_eq!(p.block_index(), vec![0, 1, 0, 1, 2]);
    }
}
