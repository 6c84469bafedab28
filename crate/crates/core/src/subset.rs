//! Fixed-width subsets of a dense index range.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of `0..universe`, backed by a fixed-width bit vector.
///
/// Ordering is lexicographic on the ascending member list, so `{}` sorts
/// before `{0}`, which sorts before `{0, 1}`, which sorts before `{1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset(FixedBitSet);

impl Subset {
    pub fn empty(universe: usize) -> Self {
        Subset(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Subset(bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut s = Self::empty(universe);
        for i in items {
            s.insert(i);
        }
        s
    }

    pub fn singleton(universe: usize, i: usize) -> Self {
        Self::from_indices(universe, [i])
    }

    /// Subset selected by a predicate over the universe.
    pub fn filter(universe: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        Self::from_indices(universe, (0..universe).filter(|&i| pred(i)))
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.0.set(i, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        let mut out = self.clone();
        out.0.intersect_with(&other.0);
        out
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut out = self.clone();
        out.0.union_with(&other.0);
        out
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        let mut out = self.clone();
        out.0.difference_with(&other.0);
        out
    }

    pub fn intersect_with(&mut self, other: &Subset) {
        self.0.intersect_with(&other.0);
    }

    pub fn union_with(&mut self, other: &Subset) {
        self.0.union_with(&other.0);
    }

    pub fn complement(&self) -> Subset {
        let mut out = self.clone();
        out.0.toggle_range(..);
        out
    }

    /// Preimage of this subset under `map` (a total map from a domain of
    /// size `map.len()` into this subset's universe).
    pub fn preimage(&self, map: &[usize]) -> Subset {
        Subset::filter(map.len(), |i| self.contains(map[i]))
    }

    /// Image of this subset under `map` into a universe of size `target`.
    pub fn image(&self, map: &[usize], target: usize) -> Subset {
        Subset::from_indices(target, self.iter().map(|i| map[i]))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter()
            .cmp(other.iter())
            .then_with(|| self.universe().cmp(&other.universe()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Every subset of `0..universe`, in increasing bitmask order. Only for small universes.
pub fn all_subsets(universe: usize) -> impl Iterator<Item = Subset> {
    assert!(universe < 32, "power set of {universe} elements is too large");
    (0u32..(1u32 << universe)).map(move |mask| Subset::filter(universe, |i| mask & (1 << i) != 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_member_order() {
        let e = Subset::empty(3);
        let a = Subset::from_indices(3, [0]);
        let ab = Subset::from_indices(3, [0, 1]);
        let b = Subset::from_indices(3, [1]);
        let mut v = vec![b.clone(), ab.clone(), e.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![e, a, ab, b]);
    }

    #[test]
    fn complement_respects_universe() {
        let s = Subset::from_indices(5, [1, 3]);
        assert_eq!(s.complement().to_vec(), vec![0, 2, 4]);
        assert!(Subset::full(5).is_full());
        assert!(Subset::full(0).is_empty());
    }

    #[test]
    fn preimage_and_image() {
        let map = [2, 0, 2, 1];
        let s = Subset::from_indices(3, [2]);
        assert_eq!(s.preimage(&map).to_vec(), vec![0, 2]);
        assert_eq!(Subset::from_indices(4, [1, 3]).image(&map, 3).to_vec(), vec![0, 1]);
    }

    #[test]
    fn power_set_size() {
        assert_eq!(all_subsets(4).count(), 16);
    }
}
