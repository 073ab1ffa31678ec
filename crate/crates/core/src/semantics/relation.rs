use std::fmt;

use fixedbitset::FixedBitSet;

use crate::lang::StateId;

/// A binary relation on the states of one state space, stored as one
/// successor bitset per source state.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Denotation {
    rows: Vec<FixedBitSet>,
}

impl Denotation {
    pub fn empty(n: usize) -> Self {
        Denotation {
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut row = FixedBitSet::with_capacity(n);
        row.insert_range(..);
        Denotation { rows: vec![row; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Self::empty(n);
        for s in 0..n {
            d.rows[s].insert(s);
        }
        d
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (StateId, StateId)>) -> Self {
        let mut d = Self::empty(n);
        for (s, t) in pairs {
            d.insert(s, t);
        }
        d
    }

    /// Number of states the relation ranges over.
    pub fn states(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, s: StateId, t: StateId) {
        self.rows[s as usize].insert(t as usize);
    }

    pub fn remove(&mut self, s: StateId, t: StateId) {
        self.rows[s as usize].set(t as usize, false);
    }

    pub fn contains(&self, s: StateId, t: StateId) -> bool {
        self.rows[s as usize].contains(t as usize)
    }

    pub fn row(&self, s: StateId) -> &FixedBitSet {
        &self.rows[s as usize]
    }

    pub(crate) fn row_mut(&mut self, s: StateId) -> &mut FixedBitSet {
        &mut self.rows[s as usize]
    }

    pub fn successors(&self, s: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.rows[s as usize].ones().map(|t| t as StateId)
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.ones().map(move |t| (s as StateId, t as StateId)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_clear())
    }

    pub fn is_full(&self) -> bool {
        let n = self.rows.len();
        self.rows.iter().all(|r| r.count_ones(..) == n)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.states(), other.states());
        self.rows
            .iter()
            .zip(&other.rows)
            .all(|(a, b)| a.is_subset(b))
    }

    pub fn union_with(&mut self, other: &Self) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.intersect_with(b);
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut d = self.clone();
        d.union_with(other);
        d
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut d = self.clone();
        d.intersect_with(other);
        d
    }

    /// Pairs of `self` not in `other`.
    pub fn difference(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for (a, b) in d.rows.iter_mut().zip(&other.rows) {
            a.difference_with(b);
        }
        d
    }

    /// Diagrammatic composition: `(s, t)` such that `s self u` and `u other t`.
    pub fn then(&self, other: &Self) -> Self {
        let n = self.states();
        let mut out = Self::empty(n);
        for (s, row) in self.rows.iter().enumerate() {
            let target = &mut out.rows[s];
            for mid in row.ones() {
                target.union_with(&other.rows[mid]);
            }
        }
        out
    }

    /// True when every state has at most one successor.
    pub fn is_functional(&self) -> bool {
        self.rows.iter().all(|r| r.count_ones(..) <= 1)
    }
}

impl fmt::Debug for Denotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_follows_pairs() {
        let a = Denotation::from_pairs(3, [(0, 1), (1, 2)]);
        let b = Denotation::from_pairs(3, [(1, 0), (2, 2)]);
        assert_eq!(a.then(&b), Denotation::from_pairs(3, [(0, 0), (1, 2)]));
        assert_eq!(a.then(&Denotation::identity(3)), a);
        assert!(a.then(&Denotation::empty(3)).is_empty());
    }

    #[test]
    fn set_operations() {
        let a = Denotation::from_pairs(2, [(0, 0), (0, 1)]);
        let b = Denotation::from_pairs(2, [(0, 1), (1, 1)]);
        assert_eq!(a.union(&b).len(), 3);
        assert_eq!(a.intersection(&b), Denotation::from_pairs(2, [(0, 1)]));
        assert_eq!(a.difference(&b), Denotation::from_pairs(2, [(0, 0)]));
        assert!(a.intersection(&b).is_subset(&a));
        assert!(Denotation::full(2).is_full());
        assert_eq!(Denotation::full(2).len(), 4);
        assert_eq!(a.pairs().collect::<Vec<_>>(), vec![(0, 0), (0, 1)]);
    }
}
