//! Disjoint sets over `1..=m` with union by rank and path compression.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("label {label} outside 1..={max}")]
pub struct LabelOutOfRange {
    pub label: usize,
    pub max: usize,
}

#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
    sets: usize,
    steps: u64,
    finds: u64,
}

impl DisjointSets {
    /// `m` singleton sets labelled `1..=m`.
    pub fn new(m: usize) -> Self {
        DisjointSets { parent: (0..=m).collect(), rank: vec![0; m + 1], sets: m, steps: 0, finds: 0 }
    }

    pub fn len(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    /// Parent-link traversals performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Compressing finds performed so far, including those inside unions.
    pub fn finds(&self) -> u64 {
        self.finds
    }

    fn check(&self, x: usize) -> Result<(), LabelOutOfRange> {
        if x == 0 || x > self.len() {
            Err(LabelOutOfRange { label: x, max: self.len() })
        } else {
            Ok(())
        }
    }

    pub fn find(&mut self, x: usize) -> Result<usize, LabelOutOfRange> {
        self.check(x)?;
        self.finds += 1;
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
            self.steps += 1;
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        Ok(root)
    }

    /// Find without compressing paths.
    pub fn find_readonly(&self, x: usize) -> Result<usize, LabelOutOfRange> {
        self.check(x)?;
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        Ok(root)
    }

    /// Merge the sets of `x` and `y`; returns the surviving root.
    pub fn union(&mut self, x: usize, y: usize) -> Result<usize, LabelOutOfRange> {
        let rx = self.find(x)?;
        let ry = self.find(y)?;
        if rx == ry {
            return Ok(rx);
        }
        self.sets -= 1;
        let (hi, lo) = if self.rank[rx] >= self.rank[ry] { (rx, ry) } else { (ry, rx) };
        self.parent[lo] = hi;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        Ok(hi)
    }

    pub fn same_set(&mut self, x: usize, y: usize) -> Result<bool, LabelOutOfRange> {
        Ok(self.find(x)? == self.find(y)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let mut d = DisjointSets::new(4);
        d.union(1, 2).unwrap();
        assert_eq!(d.find(1).unwrap(), d.find(2).unwrap());
        assert_ne!(d.find(3).unwrap(), d.find(1).unwrap());
        d.union(3, 4).unwrap();
        d.union(2, 3).unwrap();
        let r = d.find(1).unwrap();
        assert!((1..=4).all(|x| d.find(x).unwrap() == r));
        assert_eq!(d.set_count(), 1);
    }

    #[test]
    fn union_is_idempotent() {
        let mut d = DisjointSets::new(3);
        let r1 = d.union(1, 2).unwrap();
        let r2 = d.union(1, 2).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(d.set_count(), 2);
    }

    #[test]
    fn out_of_range() {
        let mut d = DisjointSets::new(2);
        assert!(d.find(0).is_err());
        assert!(d.find(3).is_err());
    }
}
