//! Finite digraphs `(X, E)`, the set operators read off maximal E-preserving
//! maps, the quasi-orders `≤₁`/`≤₂` of lattice-derived graphs, the `ℓ`/`r`
//! operators and their stable sets, and L-graph morphism checking.
//!
//! `ℓ` and `r` are a Galois connection between `≤₁`-up-sets and `≤₂`-up-sets
//! (not between arbitrary subsets); `ℓ(r(A)) ⊇ A` holds for `≤₁`-up-sets `A`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::json;

use crate::error::{Error, Result};
use crate::lattice::io::dot_escape;
use crate::lattice::Lattice;
use crate::partial_hom::PartialHom;
use crate::report::CheckReport;
use crate::subset::Subset;

/// `leq1_up[f] = {g : f ≤₁ g}` and so on.
#[derive(Clone, Debug)]
pub struct QuasiOrders {
    leq1_up: Vec<Subset>,
    leq1_down: Vec<Subset>,
    leq2_up: Vec<Subset>,
    leq2_down: Vec<Subset>,
}

impl QuasiOrders {
    fn from_relations(leq1: &[Vec<bool>], leq2: &[Vec<bool>]) -> Self {
        let m = leq1.len();
        QuasiOrders {
            leq1_up: (0..m).map(|f| Subset::filter(m, |g| leq1[f][g])).collect(),
            leq1_down: (0..m).map(|g| Subset::filter(m, |f| leq1[f][g])).collect(),
            leq2_up: (0..m).map(|f| Subset::filter(m, |g| leq2[f][g])).collect(),
            leq2_down: (0..m).map(|g| Subset::filter(m, |f| leq2[f][g])).collect(),
        }
    }
}

/// The closed-set subbasis `W_a = {f : f(a) = 1}`, `V_a = {f : f(a) = 0}`,
/// indexed by lattice element.
#[derive(Clone, Debug)]
pub struct Subbasis {
    pub w: Vec<Subset>,
    pub v: Vec<Subset>,
}

#[derive(Clone, Debug)]
pub struct Graph {
    out: Vec<Subset>,
    inc: Vec<Subset>,
    names: Vec<String>,
    labels: Option<Vec<PartialHom>>,
    orders: Option<QuasiOrders>,
    subbasis: Option<Subbasis>,
}

impl Graph {
    /// An arbitrary digraph from an adjacency matrix; reflexivity is not enforced.
    pub fn from_matrix(rel: &[Vec<bool>]) -> Self {
        let m = rel.len();
        let out = (0..m).map(|x| Subset::filter(m, |y| rel[x][y])).collect();
        let inc = (0..m).map(|x| Subset::filter(m, |y| rel[y][x])).collect();
        Graph { out, inc, names: (0..m).map(|i| format!("x{i}")).collect(), labels: None, orders: None, subbasis: None }
    }

    /// Reflexive digraph on `m` vertices: loops plus the listed edges.
    pub fn reflexive(m: usize, edges: &[(usize, usize)]) -> Self {
        let mut rel = vec![vec![false; m]; m];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(x, y) in edges {
            rel[x][y] = true;
        }
        Graph::from_matrix(&rel)
    }

    /// A graph carrying explicit quasi-orders but no partial-hom labels.
    pub fn with_quasi_orders(rel: &[Vec<bool>], leq1: &[Vec<bool>], leq2: &[Vec<bool>]) -> Result<Self> {
        let m = rel.len();
        for (name, q) in [("≤₁", leq1), ("≤₂", leq2)] {
            if q.len() != m || q.iter().any(|row| row.len() != m) {
                return Err(Error::MalformedRelation(format!("{name} is not {m}×{m}")));
            }
            if !is_quasi_order(q) {
                return Err(Error::MalformedRelation(format!("{name} is not reflexive and transitive")));
            }
        }
        let mut g = Graph::from_matrix(rel);
        g.orders = Some(QuasiOrders::from_relations(leq1, leq2));
        Ok(g)
    }

    /// `2̃`: vertices `0 < 1` with `E = ≤₁ = ≤` and `≤₂ = ≥`.
    pub fn two_element_order() -> Self {
        let le = vec![vec![true, true], vec![false, true]];
        let ge = vec![vec![true, false], vec![true, true]];
        let mut g = Graph::with_quasi_orders(&le, &le, &ge).expect("2̃");
        g.names = vec!["0".into(), "1".into()];
        g
    }

    /// The labeled graph over partial homomorphisms of `l`:
    /// `(f, g) ∈ E` iff `ones(f) ∩ zeros(g) = ∅`, with `≤₁`, `≤₂` and the
    /// `V_a`/`W_a` families.
    pub fn from_partial_homs(l: &Lattice, labels: Vec<PartialHom>) -> Self {
        let m = labels.len();
        let rel: Vec<Vec<bool>> = labels.iter().map(|f| labels.iter().map(|g| f.edge_to(g)).collect()).collect();
        let leq1: Vec<Vec<bool>> = labels.iter().map(|f| labels.iter().map(|g| f.le1(g)).collect()).collect();
        let leq2: Vec<Vec<bool>> = labels.iter().map(|f| labels.iter().map(|g| f.le2(g)).collect()).collect();
        let mut g = Graph::from_matrix(&rel);
        g.orders = Some(QuasiOrders::from_relations(&leq1, &leq2));
        g.subbasis = Some(Subbasis {
            w: l.elements().map(|a| Subset::filter(m, |i| labels[i].ones().contains(a))).collect(),
            v: l.elements().map(|a| Subset::filter(m, |i| labels[i].zeros().contains(a))).collect(),
        });
        g.names = labels.iter().map(|f| f.label(l)).collect();
        g.labels = Some(labels);
        g
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> Option<&[PartialHom]> {
        self.labels.as_deref()
    }

    pub fn subbasis(&self) -> Option<&Subbasis> {
        self.subbasis.as_ref()
    }

    pub fn has_quasi_orders(&self) -> bool {
        self.orders.is_some()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.out[x].contains(y)
    }

    pub fn first_missing_loop(&self) -> Option<usize> {
        self.vertices().find(|&x| !self.has_edge(x, x))
    }

    pub fn is_reflexive(&self) -> bool {
        self.first_missing_loop().is_none()
    }

    pub fn empty_set(&self) -> Subset {
        Subset::empty(self.len())
    }

    pub fn full_set(&self) -> Subset {
        Subset::full(self.len())
    }

    /// `ρ(A) = {x : no y ∈ A with (y, x) ∈ E}`.
    pub fn rho(&self, a: &Subset) -> Subset {
        let mut reached = self.empty_set();
        for y in a.iter() {
            reached.union_with(&self.out[y]);
        }
        reached.complement()
    }

    /// `λ(B) = {x : no y ∈ B with (x, y) ∈ E}`.
    pub fn lambda(&self, b: &Subset) -> Subset {
        let mut reached = self.empty_set();
        for y in b.iter() {
            reached.union_with(&self.inc[y]);
        }
        reached.complement()
    }

    fn orders(&self) -> Result<&QuasiOrders> {
        self.orders.as_ref().ok_or(Error::NoQuasiOrders)
    }

    pub fn le1(&self, f: usize, g: usize) -> Result<bool> {
        Ok(self.orders()?.leq1_up[f].contains(g))
    }

    pub fn le2(&self, f: usize, g: usize) -> Result<bool> {
        Ok(self.orders()?.leq2_up[f].contains(g))
    }

    /// `ℓ(A) = {f : f ≰₁ g for all g ∈ A}`.
    pub fn ell(&self, a: &Subset) -> Result<Subset> {
        let q = self.orders()?;
        let mut below = self.empty_set();
        for g in a.iter() {
            below.union_with(&q.leq1_down[g]);
        }
        Ok(below.complement())
    }

    /// `r(A) = {f : f ≰₂ g for all g ∈ A}`.
    pub fn r(&self, a: &Subset) -> Result<Subset> {
        let q = self.orders()?;
        let mut below = self.empty_set();
        for g in a.iter() {
            below.union_with(&q.leq2_down[g]);
        }
        Ok(below.complement())
    }

    pub fn is_ell_stable(&self, a: &Subset) -> Result<bool> {
        Ok(&self.ell(&self.r(a)?)? == a)
    }

    pub fn is_r_stable(&self, a: &Subset) -> Result<bool> {
        Ok(&self.r(&self.ell(a)?)? == a)
    }

    pub fn is_le1_up(&self, a: &Subset) -> Result<bool> {
        let q = self.orders()?;
        Ok(a.iter().all(|f| q.leq1_up[f].is_subset(a)))
    }

    pub fn is_le2_up(&self, a: &Subset) -> Result<bool> {
        let q = self.orders()?;
        Ok(a.iter().all(|f| q.leq2_up[f].is_subset(a)))
    }

    /// All `ℓ`-stable sets, in canonical order. Stable sets are intersections
    /// of the generators `ℓ({g})`; the intersection closure is enumerated and
    /// then filtered by `ℓr(A) = A`, since not every intersection is stable.
    pub fn ell_stable_sets(&self) -> Result<Vec<Subset>> {
        let gens = self.vertices().map(|g| self.ell(&Subset::singleton(self.len(), g))).collect::<Result<Vec<_>>>()?;
        self.intersection_closure(gens)
            .into_iter()
            .filter_map(|a| self.is_ell_stable(&a).map(|ok| ok.then_some(a)).transpose())
            .collect()
    }

    /// All `r`-stable sets, in canonical order.
    pub fn r_stable_sets(&self) -> Result<Vec<Subset>> {
        let gens = self.vertices().map(|g| self.r(&Subset::singleton(self.len(), g))).collect::<Result<Vec<_>>>()?;
        self.intersection_closure(gens)
            .into_iter()
            .filter_map(|a| self.is_r_stable(&a).map(|ok| ok.then_some(a)).transpose())
            .collect()
    }

    fn intersection_closure(&self, gens: Vec<Subset>) -> Vec<Subset> {
        let mut family: BTreeSet<Subset> = BTreeSet::from([self.full_set()]);
        let mut frontier: Vec<Subset> = vec![self.full_set()];
        while let Some(s) = frontier.pop() {
            for g in &gens {
                let t = s.intersection(g);
                if family.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        family.into_iter().collect()
    }

    /// Some `h` with `f ≤₁ h` and `g ≤₂ h`; its existence must agree with `(f, g) ∈ E`.
    pub fn witness_edge(&self, f: usize, g: usize) -> Result<Option<usize>> {
        let q = self.orders()?;
        let witness = q.leq1_up[f].intersection(&q.leq2_up[g]).iter().next();
        if witness.is_some() != self.has_edge(f, g) {
            return Err(Error::WitnessInconsistency { f, g });
        }
        Ok(witness)
    }

    /// DOT rendering of `(X, E)` without loops; optionally adds the strict
    /// parts of `≤₁` (dashed) and `≤₂` (dotted).
    pub fn to_dot(&self, title: &str, with_orders: bool) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{}\" {{", dot_escape(title)).unwrap();
        writeln!(out, "  node [shape=box];").unwrap();
        for x in self.vertices() {
            let mut label = dot_escape(self.name(x));
            if let Some(sb) = &self.subbasis {
                let tag = |fam: &[Subset]| -> Vec<String> {
                    fam.iter().enumerate().filter(|(_, s)| s.contains(x)).map(|(a, _)| a.to_string()).collect()
                };
                let w = tag(&sb.w);
                let v = tag(&sb.v);
                label = format!("{label}\\nW: {}\\nV: {}", w.join(","), v.join(","));
            }
            writeln!(out, "  v{x} [label=\"{label}\"];").unwrap();
        }
        for x in self.vertices() {
            for y in self.out[x].iter().filter(|&y| y != x) {
                writeln!(out, "  v{x} -> v{y};").unwrap();
            }
        }
        if let (true, Some(q)) = (with_orders, &self.orders) {
            for x in self.vertices() {
                for y in q.leq1_up[x].iter().filter(|&y| y != x) {
                    writeln!(out, "  v{x} -> v{y} [style=dashed, color=blue, label=\"≤₁\"];").unwrap();
                }
                for y in q.leq2_up[x].iter().filter(|&y| y != x) {
                    writeln!(out, "  v{x} -> v{y} [style=dotted, color=red, label=\"≤₂\"];").unwrap();
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn is_quasi_order(q: &[Vec<bool>]) -> bool {
    let m = q.len();
    (0..m).all(|i| q[i][i])
        && (0..m).all(|i| (0..m).all(|j| !q[i][j] || (0..m).all(|k| !q[j][k] || q[i][k])))
}

/// Total map `alpha: src → dst` preserves `E`.
pub fn is_e_preserving(src: &Graph, dst: &Graph, alpha: &[usize]) -> bool {
    src.vertices()
        .all(|x| src.out[x].iter().all(|y| dst.has_edge(alpha[x], alpha[y])))
}

/// Checks the three L-graph morphism conditions for `alpha: src → dst`:
/// (i) `≤₁` and `≤₂` preserved; (ii) `α⁻¹(r(A)) = r(α⁻¹(A))` for every
/// `ℓ`-stable `A ⊆ dst`; (iii) `α⁻¹(ℓ(A)) = ℓ(α⁻¹(A))` for every `r`-stable `A`.
pub fn check_lgraph_morphism(src: &Graph, dst: &Graph, alpha: &[usize]) -> Result<CheckReport> {
    if alpha.len() != src.len() {
        return Err(Error::IndexOutOfRange { index: alpha.len(), len: src.len() });
    }
    if let Some(&bad) = alpha.iter().find(|&&y| y >= dst.len()) {
        return Err(Error::IndexOutOfRange { index: bad, len: dst.len() });
    }
    let mut report = CheckReport::new("L-graph morphism");
    for f in src.vertices() {
        for g in src.vertices() {
            if src.le1(f, g)? {
                let ok = dst.le1(alpha[f], alpha[g])?;
                report.check(ok, "(i) preserves ≤₁", || json!({"f": f, "g": g}));
            }
            if src.le2(f, g)? {
                let ok = dst.le2(alpha[f], alpha[g])?;
                report.check(ok, "(i) preserves ≤₂", || json!({"f": f, "g": g}));
            }
        }
    }
    for a in dst.ell_stable_sets()? {
        let lhs = dst.r(&a)?.preimage(alpha);
        let rhs = src.r(&a.preimage(alpha))?;
        report.check(lhs == rhs, "(ii) α⁻¹(r(A)) = r(α⁻¹(A))", || {
            json!({"stable_set": a.to_vec(), "lhs": lhs.to_vec(), "rhs": rhs.to_vec()})
        });
    }
    for a in dst.r_stable_sets()? {
        let lhs = dst.ell(&a)?.preimage(alpha);
        let rhs = src.ell(&a.preimage(alpha))?;
        report.check(lhs == rhs, "(iii) α⁻¹(ℓ(A)) = ℓ(α⁻¹(A))", || {
            json!({"stable_set": a.to_vec(), "lhs": lhs.to_vec(), "rhs": rhs.to_vec()})
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::corpus;
    use crate::subset::all_subsets;

    fn principal_graph(spec: &str, pairs: &[(&str, &str)]) -> (Lattice, Graph) {
        let l = corpus(spec).unwrap();
        let labels = pairs
            .iter()
            .map(|&(a, b)| PartialHom::principal(&l, l.index_of(a).unwrap(), l.index_of(b).unwrap()))
            .collect();
        let g = Graph::from_partial_homs(&l, labels);
        (l, g)
    }

    /// D♭(3-chain): f1 = (↑a,↓0), f2 = (↑1,↓a).
    fn d_chain3() -> Graph {
        principal_graph("chain(3)", &[("a", "0"), ("1", "a")]).1
    }

    /// D̄♭(3-chain): g1 = (↑a,↓0), g2 = (↑1,↓0), g3 = (↑1,↓a).
    fn dbar_chain3() -> Graph {
        principal_graph("chain(3)", &[("a", "0"), ("1", "0"), ("1", "a")]).1
    }

    fn set(m: usize, xs: &[usize]) -> Subset {
        Subset::from_indices(m, xs.iter().copied())
    }

    #[test]
    fn d_chain3_edges() {
        let g = d_chain3();
        assert!(g.is_reflexive());
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn rho_of_empty_is_everything() {
        let g = Graph::reflexive(4, &[(0, 1), (2, 3)]);
        assert!(g.rho(&g.empty_set()).is_full());
        assert!(g.lambda(&g.empty_set()).is_full());
    }

    #[test]
    fn rho_and_lambda_on_d_chain3() {
        let g = d_chain3();
        assert_eq!(g.rho(&set(2, &[0])).to_vec(), vec![1]);
        assert_eq!(g.lambda(&set(2, &[1])).to_vec(), vec![0]);
    }

    #[test]
    fn ell_and_r_on_dbar_chain3() {
        let g = dbar_chain3();
        assert_eq!(g.r(&set(3, &[0])).unwrap().to_vec(), vec![2]);
        assert_eq!(g.ell(&set(3, &[2])).unwrap().to_vec(), vec![0]);
        assert!(g.ell(&g.empty_set()).unwrap().is_full());
    }

    #[test]
    fn unlabeled_graph_refuses_quasi_order_operators() {
        let g = Graph::reflexive(2, &[]);
        assert!(matches!(g.ell(&g.empty_set()), Err(Error::NoQuasiOrders)));
        assert!(matches!(g.witness_edge(0, 1), Err(Error::NoQuasiOrders)));
    }

    #[test]
    fn stability_examples() {
        let g = dbar_chain3();
        assert!(g.is_ell_stable(&set(3, &[0])).unwrap());
        assert!(g.r(&g.full_set()).unwrap().is_empty());
        assert!(g.is_ell_stable(&g.full_set()).unwrap());
        // {g2} is not ≤₁-up-closed, and ℓr fails to be extensive on it
        assert!(!g.is_le1_up(&set(3, &[1])).unwrap());
        assert_eq!(g.ell(&g.r(&set(3, &[1])).unwrap()).unwrap().to_vec(), vec![0]);
    }

    #[test]
    fn two_element_order_stable_sets() {
        let t = Graph::two_element_order();
        assert_eq!(t.r(&set(2, &[1])).unwrap().to_vec(), vec![0]);
        assert_eq!(t.ell(&set(2, &[0])).unwrap().to_vec(), vec![1]);
        assert!(t.is_ell_stable(&set(2, &[1])).unwrap());
        assert!(t.is_r_stable(&set(2, &[0])).unwrap());
        assert_eq!(t.ell_stable_sets().unwrap(), vec![set(2, &[]), set(2, &[0, 1]), set(2, &[1])]);
    }

    #[test]
    fn unrestricted_galois_property_fails_on_dbar_chain3() {
        // A = {g2}, B = {g3}: A ⊄ ℓ(B) = {g1} yet B ⊆ r(A) = {g3}
        let g = dbar_chain3();
        let a = set(3, &[1]);
        let b = set(3, &[2]);
        assert!(!a.is_subset(&g.ell(&b).unwrap()));
        assert!(b.is_subset(&g.r(&a).unwrap()));
    }

    #[test]
    fn witness_examples() {
        let g = dbar_chain3();
        assert!(g.witness_edge(1, 0).unwrap().is_some());
        assert_eq!(g.witness_edge(0, 2).unwrap(), None);
        let (l, m3) = principal_graph("M3", &[("c", "d"), ("b", "0"), ("c", "0")]);
        assert_eq!(m3.witness_edge(0, 0).unwrap(), Some(0));
        let h = m3.witness_edge(1, 2).unwrap().unwrap();
        let labels = m3.labels().unwrap();
        assert!(set(5, &[l.index_of("b").unwrap(), l.top()]).is_subset(labels[h].ones()));
        assert!(labels[h].zeros().contains(l.bot()));
    }

    #[test]
    fn witness_inconsistency_detected() {
        let rel = vec![vec![true, true], vec![true, true]];
        let id = vec![vec![true, false], vec![false, true]];
        let g = Graph::with_quasi_orders(&rel, &id, &id).unwrap();
        assert!(matches!(g.witness_edge(0, 1), Err(Error::WitnessInconsistency { f: 0, g: 1 })));
    }

    #[test]
    fn malformed_quasi_order_rejected() {
        let rel = vec![vec![true, false], vec![false, true]];
        let bad = vec![vec![false, false], vec![false, true]];
        assert!(matches!(Graph::with_quasi_orders(&rel, &bad, &rel), Err(Error::MalformedRelation(_))));
    }

    #[test]
    fn identity_is_an_lgraph_morphism() {
        let g = dbar_chain3();
        let id: Vec<usize> = g.vertices().collect();
        let report = check_lgraph_morphism(&g, &g, &id).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(is_e_preserving(&g, &g, &id));
    }

    #[test]
    fn lambda_rho_antitone_exhaustive_small() {
        let g = Graph::reflexive(4, &[(0, 1), (1, 2), (3, 0), (2, 0)]);
        let subsets: Vec<Subset> = all_subsets(4).collect();
        for a in &subsets {
            for b in &subsets {
                if a.is_subset(b) {
                    assert!(g.rho(b).is_subset(&g.rho(a)));
                    assert!(g.lambda(b).is_subset(&g.lambda(a)));
                }
            }
        }
    }

    #[test]
    fn dot_suppresses_loops() {
        let g = d_chain3();
        let dot = g.to_dot("D", false);
        assert_eq!(dot.matches("->").count(), 1);
        assert!(dot.contains("W: "));
        let with = dbar_chain3().to_dot("Dbar", true);
        assert!(with.contains("≤₁") && with.contains("≤₂"));
    }
}
