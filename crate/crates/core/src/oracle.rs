//! Independent ground truth: the filter/ideal polarity completion,
//! brute-force enumerations, and isomorphism search between completions
//! that fixes the embedded lattice.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lattice::Lattice;
use crate::mpe::{Completion, MpeMap, PairHost};
use crate::partial_hom::{is_filter, is_ideal, PartialHom};
use crate::subset::{all_subsets, Subset};

/// Largest graph `brute_force_mpe` scans (3^m partial maps).
pub const BRUTE_FORCE_GRAPH_LIMIT: usize = 16;
/// Largest lattice whose partial homomorphisms are scanned exhaustively.
pub const PARTIAL_HOM_SCAN_LIMIT: usize = 10;
/// Largest lattice whose subsets are scanned for filters and ideals.
pub const FILTER_SCAN_LIMIT: usize = 16;

/// Filters `↑a` and ideals `↓b` of a finite lattice, related by `R(F, I)`
/// iff `F ∩ I ≠ ∅`. Filters and ideals are indexed by their generator.
#[derive(Clone, Debug)]
pub struct PolarityContext {
    lattice: Arc<Lattice>,
    filters: Vec<Subset>,
    ideals: Vec<Subset>,
    /// `meets[F] = {I : R(F, I)}`.
    meets: Vec<Subset>,
    /// `met_by[I] = {F : R(F, I)}`.
    met_by: Vec<Subset>,
}

impl PolarityContext {
    pub fn new(lattice: Arc<Lattice>) -> Self {
        let n = lattice.len();
        let filters: Vec<Subset> = lattice.elements().map(|a| lattice.up(a).clone()).collect();
        let ideals: Vec<Subset> = lattice.elements().map(|a| lattice.down(a).clone()).collect();
        let meets: Vec<Subset> = filters.iter().map(|f| Subset::filter(n, |i| !f.is_disjoint(&ideals[i]))).collect();
        let met_by: Vec<Subset> = (0..n).map(|i| Subset::filter(n, |f| meets[f].contains(i))).collect();
        for a in lattice.elements() {
            for b in lattice.elements() {
                assert_eq!(meets[a].contains(b), lattice.leq(a, b), "↑a ∩ ↓b ≠ ∅ iff a ≤ b");
            }
        }
        PolarityContext { lattice, filters, ideals, meets, met_by }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn filters(&self) -> &[Subset] {
        &self.filters
    }

    pub fn ideals(&self) -> &[Subset] {
        &self.ideals
    }

    pub fn related(&self, filter: usize, ideal: usize) -> bool {
        self.meets[filter].contains(ideal)
    }
}

impl PairHost for PolarityContext {
    fn ones_universe(&self) -> usize {
        self.filters.len()
    }

    fn zeros_universe(&self) -> usize {
        self.ideals.len()
    }

    /// `S′ = {I : R(F, I) for all F ∈ S}`.
    fn zeros_for(&self, ones: &Subset) -> Subset {
        let mut out = Subset::full(self.ideals.len());
        for f in ones.iter() {
            out.intersect_with(&self.meets[f]);
        }
        out
    }

    /// `T′ = {F : R(F, I) for all I ∈ T}`.
    fn ones_for(&self, zeros: &Subset) -> Subset {
        let mut out = Subset::full(self.filters.len());
        for i in zeros.iter() {
            out.intersect_with(&self.met_by[i]);
        }
        out
    }

    fn ones_name(&self, i: usize) -> String {
        format!("↑{}", self.lattice.element_name(i))
    }

    fn zeros_name(&self, j: usize) -> String {
        format!("↓{}", self.lattice.element_name(j))
    }
}

/// The lattice of Galois-stable sets of filters, enumerated as the
/// intersection closure of the extents `{F : R(F, I)}`, with `a` embedded
/// as `{F : a ∈ F}`.
pub fn gh_extension(l: &Arc<Lattice>) -> Result<Completion> {
    let ctx = Arc::new(PolarityContext::new(l.clone()));
    let n = l.len();
    let mut closed = std::collections::BTreeSet::from([Subset::full(n)]);
    let mut frontier = vec![Subset::full(n)];
    while let Some(s) = frontier.pop() {
        for extent in &ctx.met_by {
            let t = s.intersection(extent);
            if closed.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    let elements: Vec<MpeMap> = closed.into_iter().map(|s| MpeMap::new(s.clone(), ctx.zeros_for(&s))).collect();
    let mut c = Completion::from_elements(&format!("polarity({})", l.name()), ctx.clone(), elements)?;
    c.embed_with(l.clone(), |a| {
        let s = Subset::filter(n, |x| ctx.filters[x].contains(a));
        let phi = MpeMap::new(s.clone(), ctx.zeros_for(&s));
        if ctx.is_fixpoint(&phi) {
            Ok(phi)
        } else {
            Err(Error::EmbeddingFailed(format!("{{F : {} ∈ F}} is not Galois-stable", l.element_name(a))))
        }
    })?;
    Ok(c)
}

/// Every maximal E-preserving partial map into `2̃`, by a pruned scan of all
/// `3^m` partial maps: a map is kept when no single unassigned vertex can be
/// added with either value.
pub fn brute_force_mpe(g: &Graph) -> Result<Vec<MpeMap>> {
    let m = g.len();
    if m > BRUTE_FORCE_GRAPH_LIMIT {
        return Err(Error::TooLarge { size: m, limit: BRUTE_FORCE_GRAPH_LIMIT });
    }
    if let Some(x) = g.first_missing_loop() {
        return Err(Error::NonReflexiveGraph(x));
    }
    let mut out = Vec::new();
    let mut vals = vec![None; m];
    scan(g, 0, &mut vals, &mut out);
    out.sort();
    Ok(out)
}

fn can_assign(g: &Graph, vals: &[Option<bool>], x: usize, v: bool) -> bool {
    vals.iter().enumerate().all(|(y, &w)| match (v, w) {
        (true, Some(false)) => !g.has_edge(x, y),
        (false, Some(true)) => !g.has_edge(y, x),
        _ => true,
    })
}

fn scan(g: &Graph, x: usize, vals: &mut Vec<Option<bool>>, out: &mut Vec<MpeMap>) {
    let m = g.len();
    if x == m {
        let maximal = (0..m)
            .filter(|&y| vals[y].is_none())
            .all(|y| !can_assign(g, vals, y, true) && !can_assign(g, vals, y, false));
        if maximal {
            let ones = Subset::filter(m, |y| vals[y] == Some(true));
            let zeros = Subset::filter(m, |y| vals[y] == Some(false));
            out.push(MpeMap::new(ones, zeros));
        }
        return;
    }
    for v in [None, Some(false), Some(true)] {
        vals[x] = None;
        if v.map_or(true, |b| can_assign(g, vals, x, b)) {
            vals[x] = v;
            scan(g, x + 1, vals, out);
        }
    }
    vals[x] = None;
}

/// Searches for an order-isomorphism `h: c1 → c2` with `h ∘ e1 = e2`.
/// Values on the embedded copy are forced and propagated along meets and
/// joins; whatever stays open is filled by backtracking.
pub fn iso_fixing_l(c1: &Completion, c2: &Completion) -> Result<Option<Vec<usize>>> {
    let (e1, e2) = match (c1.embedding(), c2.embedding()) {
        (Some(e1), Some(e2)) => (e1, e2),
        (e1, e2) => {
            return Err(Error::EmbeddingMismatch(e1.map_or(0, |e| e.map.len()), e2.map_or(0, |e| e.map.len())))
        }
    };
    // differently sized completions cannot be isomorphic whatever they embed
    if c1.len() != c2.len() {
        return Ok(None);
    }
    if e1.map.len() != e2.map.len() || !e1.lattice.same_order(&e2.lattice) {
        return Err(Error::EmbeddingMismatch(e1.map.len(), e2.map.len()));
    }
    let (o1, o2) = (c1.order(), c2.order());
    let n = c1.len();
    let mut h: Vec<Option<usize>> = vec![None; n];
    let mut queue = Vec::new();
    for (&x, &y) in e1.map.iter().zip(&e2.map) {
        match h[x] {
            Some(z) if z != y => return Ok(None),
            Some(_) => {}
            None => {
                h[x] = Some(y);
                queue.push(x);
            }
        }
    }
    // propagate along binary meets and joins
    while let Some(x) = queue.pop() {
        let hx = h[x].unwrap();
        for z in 0..n {
            let Some(hz) = h[z] else { continue };
            for (src, dst) in [(o1.meet(x, z), o2.meet(hx, hz)), (o1.join(x, z), o2.join(hx, hz))] {
                match h[src] {
                    Some(v) if v != dst => return Ok(None),
                    Some(_) => {}
                    None => {
                        h[src] = Some(dst);
                        queue.push(src);
                    }
                }
            }
        }
    }
    let mut used = vec![false; n];
    for &v in h.iter().flatten() {
        if used[v] {
            return Ok(None);
        }
        used[v] = true;
    }
    let open: Vec<usize> = (0..n).filter(|&x| h[x].is_none()).collect();
    if fill(o1, o2, &open, 0, &mut h, &mut used) {
        let map: Vec<usize> = h.into_iter().map(Option::unwrap).collect();
        let iso = (0..n).all(|x| (0..n).all(|y| o1.leq(x, y) == o2.leq(map[x], map[y])));
        Ok(iso.then_some(map))
    } else {
        Ok(None)
    }
}

fn fill(o1: &Lattice, o2: &Lattice, open: &[usize], k: usize, h: &mut [Option<usize>], used: &mut [bool]) -> bool {
    let Some(&x) = open.get(k) else { return true };
    for y in 0..used.len() {
        if used[y] {
            continue;
        }
        let consistent = (0..h.len()).all(|z| match h[z] {
            Some(hz) => o1.leq(x, z) == o2.leq(y, hz) && o1.leq(z, x) == o2.leq(hz, y),
            None => true,
        });
        if consistent {
            h[x] = Some(y);
            used[y] = true;
            if fill(o1, o2, open, k + 1, h, used) {
                return true;
            }
            h[x] = None;
            used[y] = false;
        }
    }
    false
}

/// All nonempty up-closed, meet-closed subsets.
pub fn brute_force_filters(l: &Lattice) -> Result<Vec<Subset>> {
    if l.len() > FILTER_SCAN_LIMIT {
        return Err(Error::TooLarge { size: l.len(), limit: FILTER_SCAN_LIMIT });
    }
    let mut out: Vec<Subset> = all_subsets(l.len()).filter(|s| is_filter(l, s)).collect();
    out.sort();
    Ok(out)
}

/// All nonempty down-closed, join-closed subsets.
pub fn brute_force_ideals(l: &Lattice) -> Result<Vec<Subset>> {
    if l.len() > FILTER_SCAN_LIMIT {
        return Err(Error::TooLarge { size: l.len(), limit: FILTER_SCAN_LIMIT });
    }
    let mut out: Vec<Subset> = all_subsets(l.len()).filter(|s| is_ideal(l, s)).collect();
    out.sort();
    Ok(out)
}

/// Every partial homomorphism `L ⇀ 2` (0,1-sublattice domain), by scanning
/// all `3^n` partial maps sending `0 ↦ 0` and `1 ↦ 1`.
pub fn all_partial_homs(l: &Lattice) -> Result<Vec<PartialHom>> {
    let n = l.len();
    if n > PARTIAL_HOM_SCAN_LIMIT {
        return Err(Error::TooLarge { size: n, limit: PARTIAL_HOM_SCAN_LIMIT });
    }
    if n == 1 {
        // 0 = 1 cannot take two values
        return Ok(Vec::new());
    }
    let free: Vec<usize> = l.elements().filter(|&a| a != l.bot() && a != l.top()).collect();
    let mut out = Vec::new();
    let total = 3usize.pow(free.len() as u32);
    for code in 0..total {
        let mut ones = Subset::singleton(n, l.top());
        let mut zeros = Subset::singleton(n, l.bot());
        let mut c = code;
        for &a in &free {
            match c % 3 {
                1 => zeros.insert(a),
                2 => ones.insert(a),
                _ => {}
            }
            c /= 3;
        }
        let f = PartialHom::new(ones, zeros);
        if f.is_partial_hom(l) {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

/// Partial homomorphisms with no proper extension.
pub fn brute_force_mph(l: &Lattice) -> Result<Vec<PartialHom>> {
    let all = all_partial_homs(l)?;
    Ok(all.iter().filter(|f| !all.iter().any(|g| g != *f && g.extends(f))).cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{corpus, standard_corpus};
    use crate::mpe::enumerate_mpe;
    use crate::ploscica::{build_d, canonical_extension_ploscica};
    use proptest::prelude::*;

    #[test]
    fn chain3_polarity_has_three_nested_stable_sets() {
        let l = Arc::new(corpus("chain(3)").unwrap());
        let c = gh_extension(&l).unwrap();
        let sizes: Vec<usize> = (0..3).map(|i| c.element(i).ones().len()).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3]);
        let ctx = PolarityContext::new(l.clone());
        assert!(!ctx.is_fixpoint(&MpeMap::new(Subset::empty(3), ctx.zeros_for(&Subset::empty(3)))));
    }

    #[test]
    fn m3_polarity_has_five_stable_sets() {
        let l = Arc::new(corpus("M3").unwrap());
        let c = gh_extension(&l).unwrap();
        assert_eq!(c.len(), 5);
        assert!(c.check_embedding().unwrap().passed());
        assert!(matches!(c.filter_elements(), Err(Error::NoSubbasis)));
    }

    #[test]
    fn stable_sets_match_power_set_scan() {
        for e in standard_corpus(5, 11) {
            let l = Arc::new(e.lattice);
            let ctx = PolarityContext::new(l.clone());
            let scan: Vec<Subset> = all_subsets(l.len())
                .filter(|s| ctx.ones_for(&ctx.zeros_for(s)) == *s)
                .collect();
            let c = gh_extension(&l).unwrap();
            let mut got: Vec<Subset> = c.elements().iter().map(|p| p.ones().clone()).collect();
            let mut want = scan;
            got.sort();
            want.sort();
            assert_eq!(got, want, "{}", e.spec);
        }
    }

    #[test]
    fn filters_are_principal() {
        for e in standard_corpus(8, 5) {
            let l = &e.lattice;
            let mut principal: Vec<Subset> = l.elements().map(|a| l.principal_filter(a).unwrap()).collect();
            principal.sort();
            assert_eq!(brute_force_filters(l).unwrap(), principal, "{}", e.spec);
            let mut ideals: Vec<Subset> = l.elements().map(|a| l.principal_ideal(a).unwrap()).collect();
            ideals.sort();
            assert_eq!(brute_force_ideals(l).unwrap(), ideals, "{}", e.spec);
        }
    }

    #[test]
    fn brute_force_small_graphs() {
        assert_eq!(brute_force_mpe(&Graph::reflexive(1, &[])).unwrap().len(), 2);
        assert_eq!(brute_force_mpe(&Graph::reflexive(2, &[])).unwrap().len(), 4);
        let d = build_d(&corpus("M3").unwrap());
        let brute = brute_force_mpe(&d).unwrap();
        assert_eq!(brute.len(), 5);
        assert_eq!(brute, enumerate_mpe(Arc::new(d)).unwrap().elements().to_vec());
        assert!(matches!(brute_force_mpe(&Graph::reflexive(17, &[])), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn iso_between_constructions() {
        for spec in ["M3", "N5", "boolean(3)", "chain(5)"] {
            let l = Arc::new(corpus(spec).unwrap());
            let p = canonical_extension_ploscica(&l).unwrap();
            let g = gh_extension(&l).unwrap();
            let h = iso_fixing_l(&p, &g).unwrap().expect(spec);
            assert_eq!(h.len(), l.len());
        }
    }

    #[test]
    fn iso_absent_or_refused() {
        let chain = Arc::new(corpus("chain(3)").unwrap());
        let square = Arc::new(corpus("boolean(2)").unwrap());
        let a = canonical_extension_ploscica(&chain).unwrap();
        let b = canonical_extension_ploscica(&square).unwrap();
        assert_eq!(iso_fixing_l(&a, &b).unwrap(), None);
        let four = canonical_extension_ploscica(&Arc::new(corpus("chain(4)").unwrap())).unwrap();
        assert!(matches!(iso_fixing_l(&four, &b), Err(Error::EmbeddingMismatch(4, 4))));
        let bare = enumerate_mpe(Arc::new(build_d(&chain))).unwrap();
        assert!(matches!(iso_fixing_l(&a, &bare), Err(Error::EmbeddingMismatch(3, 0))));
    }

    #[test]
    fn partial_homs_of_chain3() {
        let l = corpus("chain(3)").unwrap();
        // domain {0,1}, plus a ↦ 0 and a ↦ 1
        assert_eq!(all_partial_homs(&l).unwrap().len(), 3);
        assert_eq!(brute_force_mph(&l).unwrap().len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn brute_force_agrees_with_fixpoints(bits in proptest::collection::vec(any::<bool>(), 36), m in 1usize..=6) {
            let rel: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| i == j || bits[i * 6 + j]).collect()).collect();
            let g = Graph::from_matrix(&rel);
            let brute = brute_force_mpe(&g).unwrap();
            let c = enumerate_mpe(Arc::new(g)).unwrap();
            prop_assert_eq!(brute, c.elements().to_vec());
        }
    }
}
