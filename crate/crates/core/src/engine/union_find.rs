use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// Disjoint sets over `0..n` with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: alloc::vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }

    /// Components with at least two elements, each sorted, ordered by their
    /// smallest element.
    pub(crate) fn nontrivial_components(&mut self) -> Vec<Vec<usize>> {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.parent.len() {
            let root = self.find(x);
            groups.entry(root).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().filter(|g| g.len() > 1).collect();
        out.sort_by_key(|g| g[0]);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn transitive_closure() {
        let mut ds = DisjointSet::new(6);
        ds.union(4, 1);
        ds.union(1, 5);
        ds.union(2, 3);
        assert_eq!(ds.nontrivial_components(), vec![vec![1, 4, 5], vec![2, 3]]);
    }

    #[test]
    fn singletons_are_dropped() {
        let mut ds = DisjointSet::new(3);
        assert!(ds.nontrivial_components().is_empty());
        ds.union(2, 2);
        assert!(ds.nontrivial_components().is_empty());
    }
}
