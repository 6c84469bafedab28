//! Partial maps `L ⇀ 2` stored as a disjoint `(ones, zeros)` pair.

use std::fmt;

use serde::Serialize;

use crate::lattice::{Lattice, LatticeHom};
use crate::subset::Subset;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialHom {
    ones: Subset,
    zeros: Subset,
}

impl PartialHom {
    /// Panics if `ones` and `zeros` overlap.
    pub fn new(ones: Subset, zeros: Subset) -> Self {
        assert!(ones.is_disjoint(&zeros), "partial map assigns both 0 and 1");
        PartialHom { ones, zeros }
    }

    /// The special partial homomorphism `(↑a, ↓b)`; requires `a ≰ b`.
    pub fn principal(l: &Lattice, a: usize, b: usize) -> Self {
        debug_assert!(!l.leq(a, b));
        PartialHom::new(l.up(a).clone(), l.down(b).clone())
    }

    pub fn ones(&self) -> &Subset {
        &self.ones
    }

    pub fn zeros(&self) -> &Subset {
        &self.zeros
    }

    pub fn domain(&self) -> Subset {
        self.ones.union(&self.zeros)
    }

    pub fn value(&self, a: usize) -> Option<bool> {
        if self.ones.contains(a) {
            Some(true)
        } else if self.zeros.contains(a) {
            Some(false)
        } else {
            None
        }
    }

    /// `(self, other) ∈ E`: `self(x) ≤ other(x)` on the common domain.
    pub fn edge_to(&self, other: &PartialHom) -> bool {
        self.ones.is_disjoint(&other.zeros)
    }

    /// `self ≤₁ other`.
    pub fn le1(&self, other: &PartialHom) -> bool {
        self.ones.is_subset(&other.ones)
    }

    /// `self ≤₂ other`.
    pub fn le2(&self, other: &PartialHom) -> bool {
        self.zeros.is_subset(&other.zeros)
    }

    /// `self` extends `other` (agrees on, and possibly enlarges, its domain).
    pub fn extends(&self, other: &PartialHom) -> bool {
        other.ones.is_subset(&self.ones) && other.zeros.is_subset(&self.zeros)
    }

    /// `self ∘ u` for `u: L → K` with `self` a partial map on `K`.
    pub fn compose(&self, u: &LatticeHom) -> PartialHom {
        PartialHom::new(self.ones.preimage(u.map()), self.zeros.preimage(u.map()))
    }

    /// Domain is a 0,1-sublattice and the map is a homomorphism on it.
    pub fn is_partial_hom(&self, l: &Lattice) -> bool {
        let dom = self.domain();
        if self.value(l.bot()) != Some(false) || self.value(l.top()) != Some(true) {
            return false;
        }
        let members = dom.to_vec();
        members.iter().all(|&a| {
            members.iter().all(|&b| {
                let (x, y) = (self.value(a).unwrap(), self.value(b).unwrap());
                self.value(l.meet(a, b)) == Some(x && y) && self.value(l.join(a, b)) == Some(x || y)
            })
        })
    }

    /// `ones` is a filter and `zeros` an ideal of `l`.
    pub fn is_special(&self, l: &Lattice) -> bool {
        is_filter(l, &self.ones) && is_ideal(l, &self.zeros)
    }

    /// Principal generators `(a, b)` with `ones = ↑a` and `zeros = ↓b`, if any.
    pub fn generators(&self, l: &Lattice) -> Option<(usize, usize)> {
        let a = l.meet_all(self.ones.iter());
        let b = l.join_all(self.zeros.iter());
        (l.up(a) == &self.ones && l.down(b) == &self.zeros).then_some((a, b))
    }

    /// `(↑a,↓b)` when principal, otherwise the explicit sets.
    pub fn label(&self, l: &Lattice) -> String {
        match self.generators(l) {
            Some((a, b)) => format!("(↑{},↓{})", l.element_name(a), l.element_name(b)),
            None => {
                let names = |s: &Subset| s.iter().map(|x| l.element_name(x).to_string()).collect::<Vec<_>>().join(",");
                format!("({{{}}},{{{}}})", names(&self.ones), names(&self.zeros))
            }
        }
    }

    pub fn to_record(&self, l: &Lattice) -> PartialHomRecord {
        let names = |s: &Subset| s.iter().map(|x| l.element_name(x).to_string()).collect();
        PartialHomRecord { label: self.label(l), ones: names(&self.ones), zeros: names(&self.zeros) }
    }
}

impl fmt::Debug for PartialHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} ↦ 1, {:?} ↦ 0)", self.ones, self.zeros)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PartialHomRecord {
    pub label: String,
    pub ones: Vec<String>,
    pub zeros: Vec<String>,
}

pub fn is_filter(l: &Lattice, s: &Subset) -> bool {
    !s.is_empty()
        && s.iter().all(|a| l.up(a).is_subset(s))
        && s.iter().all(|a| s.iter().all(|b| s.contains(l.meet(a, b))))
}

pub fn is_ideal(l: &Lattice, s: &Subset) -> bool {
    !s.is_empty()
        && s.iter().all(|a| l.down(a).is_subset(s))
        && s.iter().all(|a| s.iter().all(|b| s.contains(l.join(a, b))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::corpus;
    use std::sync::Arc;

    #[test]
    fn principal_pair_is_special_partial_hom() {
        let l = corpus("M3").unwrap();
        let f = PartialHom::principal(&l, 2, 3);
        assert!(f.is_special(&l));
        assert!(f.is_partial_hom(&l));
        assert_eq!(f.label(&l), "(↑c,↓d)");
        assert_eq!(f.domain().to_vec(), vec![0, 2, 3, 4]);
    }

    #[test]
    fn edge_is_disjointness() {
        let l = corpus("M3").unwrap();
        let f = PartialHom::principal(&l, 1, 2);
        let g = PartialHom::principal(&l, 1, 3);
        assert!(f.edge_to(&g));
        let h = PartialHom::principal(&l, 2, 1);
        assert!(!f.edge_to(&h));
    }

    #[test]
    fn composition_with_fig3_arrow() {
        let l = Arc::new(corpus("chain(3)").unwrap());
        let k = Arc::new(corpus("M3").unwrap());
        let u = LatticeHom::from_names(l.clone(), k.clone(), &[("0", "0"), ("a", "b"), ("1", "1")]).unwrap();
        let f = PartialHom::principal(&k, 2, 3);
        let fu = f.compose(&u);
        assert_eq!(fu.ones().to_vec(), vec![2]);
        assert_eq!(fu.zeros().to_vec(), vec![0]);
        assert!(fu.is_partial_hom(&l));
        assert_eq!(fu.label(&l), "(↑1,↓0)");
    }

    #[test]
    fn non_special_partial_hom_exists() {
        // N5 sublattice {0,a,1} with a ↦ 1: the 1-set {a,1} misses b ≥ a
        let l = corpus("N5").unwrap();
        let a = l.index_of("a").unwrap();
        let f = PartialHom::new(Subset::from_indices(5, [a, l.top()]), Subset::from_indices(5, [l.bot()]));
        assert!(f.is_partial_hom(&l));
        assert!(!f.is_special(&l));
        assert_eq!(f.label(&l), "({a,1},{0})");
    }
}
