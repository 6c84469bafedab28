use std::sync::Arc;

use super::Lattice;
use crate::error::{Error, Result};

/// A bounded-lattice homomorphism, verified exhaustively on construction.
#[derive(Clone, Debug)]
pub struct LatticeHom {
    src: Arc<Lattice>,
    dst: Arc<Lattice>,
    map: Vec<usize>,
}

impl LatticeHom {
    pub fn validate(src: Arc<Lattice>, dst: Arc<Lattice>, map: Vec<usize>) -> Result<Self> {
        if map.len() != src.len() {
            return Err(Error::NotAHomomorphism(format!(
                "map has {} entries for a source of {} elements",
                map.len(),
                src.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&x| x >= dst.len()) {
            return Err(Error::IndexOutOfRange { index: bad, len: dst.len() });
        }
        if let Some(witness) = hom_violation(&src, &dst, &map) {
            return Err(Error::NotAHomomorphism(witness));
        }
        Ok(LatticeHom { src, dst, map })
    }

    /// Validates a map given by element names.
    pub fn from_names(src: Arc<Lattice>, dst: Arc<Lattice>, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut map = vec![usize::MAX; src.len()];
        for &(a, b) in pairs {
            map[src.index_of(a)?] = dst.index_of(b)?;
        }
        if let Some(a) = map.iter().position(|&x| x == usize::MAX) {
            return Err(Error::NotAHomomorphism(format!("map is not total: `{}` unassigned", src.element_name(a))));
        }
        Self::validate(src, dst, map)
    }

    pub fn identity(l: Arc<Lattice>) -> Self {
        let map = l.elements().collect();
        LatticeHom { src: l.clone(), dst: l, map }
    }

    pub fn src(&self) -> &Arc<Lattice> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Lattice> {
        &self.dst
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &LatticeHom) -> Result<LatticeHom> {
        if !self.dst.same_order(&next.src) {
            return Err(Error::HomInvalid(format!(
                "cannot compose {} → {} with {} → {}",
                self.src.name(),
                self.dst.name(),
                next.src.name(),
                next.dst.name()
            )));
        }
        let map = self.map.iter().map(|&x| next.map[x]).collect();
        Ok(LatticeHom { src: self.src.clone(), dst: next.dst.clone(), map })
    }

    /// Every homomorphism `src → dst`, in lexicographic order of the map.
    /// Backtracking search; intended for small lattices.
    pub fn enumerate(src: &Arc<Lattice>, dst: &Arc<Lattice>) -> Vec<LatticeHom> {
        let n = src.len();
        let mut out = Vec::new();
        let mut map = vec![usize::MAX; n];
        search(src, dst, &mut map, 0, &mut out);
        out.into_iter()
            .map(|map| LatticeHom { src: src.clone(), dst: dst.clone(), map })
            .collect()
    }
}

fn search(src: &Lattice, dst: &Lattice, map: &mut Vec<usize>, next: usize, out: &mut Vec<Vec<usize>>) {
    if next == src.len() {
        out.push(map.clone());
        return;
    }
    let candidates: Vec<usize> = if next == src.bot() {
        vec![dst.bot()]
    } else if next == src.top() {
        vec![dst.top()]
    } else {
        dst.elements().collect()
    };
    for y in candidates {
        map[next] = y;
        if consistent_prefix(src, dst, map, next) {
            search(src, dst, map, next + 1, out);
        }
    }
    map[next] = usize::MAX;
}

/// Checks every meet/join constraint whose three elements are all assigned
/// and one of which is `last`.
fn consistent_prefix(src: &Lattice, dst: &Lattice, map: &[usize], last: usize) -> bool {
    let assigned = |x: usize| map[x] != usize::MAX;
    for a in 0..=last {
        for b in 0..=last {
            let m = src.meet(a, b);
            let j = src.join(a, b);
            if assigned(m) && (a == last || b == last || m == last) && map[m] != dst.meet(map[a], map[b]) {
                return false;
            }
            if assigned(j) && (a == last || b == last || j == last) && map[j] != dst.join(map[a], map[b]) {
                return false;
            }
        }
    }
    if src.bot() <= last && map[src.bot()] != dst.bot() {
        return false;
    }
    !(src.top() <= last && map[src.top()] != dst.top())
}

fn hom_violation(src: &Lattice, dst: &Lattice, map: &[usize]) -> Option<String> {
    let name = |x: usize| src.element_name(x).to_string();
    let dname = |y: usize| dst.element_name(y).to_string();
    if map[src.bot()] != dst.bot() {
        return Some(format!("bottom {} maps to {}, not {}", name(src.bot()), dname(map[src.bot()]), dname(dst.bot())));
    }
    if map[src.top()] != dst.top() {
        return Some(format!("top {} maps to {}, not {}", name(src.top()), dname(map[src.top()]), dname(dst.top())));
    }
    for a in src.elements() {
        for b in src.elements() {
            let m = src.meet(a, b);
            if map[m] != dst.meet(map[a], map[b]) {
                return Some(format!(
                    "meet witness ({}, {}, {}): u({}∧{}) = {} but u({})∧u({}) = {}",
                    name(a),
                    name(b),
                    name(m),
                    name(a),
                    name(b),
                    dname(map[m]),
                    name(a),
                    name(b),
                    dname(dst.meet(map[a], map[b]))
                ));
            }
            let j = src.join(a, b);
            if map[j] != dst.join(map[a], map[b]) {
                return Some(format!(
                    "join witness ({}, {}, {}): u({}∨{}) = {} but u({})∨u({}) = {}",
                    name(a),
                    name(b),
                    name(j),
                    name(a),
                    name(b),
                    dname(map[j]),
                    name(a),
                    name(b),
                    dname(dst.join(map[a], map[b]))
                ));
            }
        }
    }
    None
}
