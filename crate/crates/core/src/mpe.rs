//! Maximal partial E-preserving maps into the two-element order and the
//! complete lattice they form.
//!
//! On a reflexive graph a partial map `φ` into `2̃` is maximal E-preserving
//! exactly when `zeros(φ) = ρ(ones(φ))` and `ones(φ) = λ(zeros(φ))`: the
//! fixpoint equations say that no vertex outside the domain can be added
//! with either value. Reflexivity is what makes the two sides disjoint.
//!
//! The same fixpoint machinery serves any pair of antitone maps forming a
//! Galois connection, which is how the polarity completion reuses
//! [`Completion`]; see [`PairHost`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{Graph, Subbasis};
use crate::lattice::io::lattice_to_dot;
use crate::lattice::{Lattice, OrderInput};
use crate::report::CheckReport;
use crate::subset::{all_subsets, Subset};

/// Lattices up to this size get exhaustive subset-pair compactness checks.
pub const COMPACTNESS_EXHAUSTIVE_LIMIT: usize = 5;
/// Sampled subset pairs per lattice beyond that size.
pub const COMPACTNESS_SAMPLES: usize = 1000;

/// A maximal partial map into `2̃`, as its `(ones, zeros)` pair.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MpeMap {
    ones: Subset,
    zeros: Subset,
}

impl MpeMap {
    pub fn new(ones: Subset, zeros: Subset) -> Self {
        MpeMap { ones, zeros }
    }

    pub fn ones(&self) -> &Subset {
        &self.ones
    }

    pub fn zeros(&self) -> &Subset {
        &self.zeros
    }

    pub fn value(&self, x: usize) -> Option<bool> {
        if self.ones.contains(x) {
            Some(true)
        } else if self.zeros.contains(x) {
            Some(false)
        } else {
            None
        }
    }

    pub fn domain(&self) -> Subset {
        self.ones.union(&self.zeros)
    }

    pub fn is_total(&self) -> bool {
        self.domain().is_full()
    }
}

impl fmt::Debug for MpeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} ↦ 1, {:?} ↦ 0)", self.ones, self.zeros)
    }
}

/// The pair of antitone maps a completion is the fixpoint lattice of.
pub trait PairHost: fmt::Debug + Send + Sync {
    fn ones_universe(&self) -> usize;
    fn zeros_universe(&self) -> usize;
    /// The largest zero-set compatible with `ones`.
    fn zeros_for(&self, ones: &Subset) -> Subset;
    /// The largest one-set compatible with `zeros`.
    fn ones_for(&self, zeros: &Subset) -> Subset;
    fn ones_name(&self, i: usize) -> String;
    fn zeros_name(&self, j: usize) -> String;
    fn subbasis(&self) -> Option<&Subbasis> {
        None
    }
    fn as_graph(&self) -> Option<&Graph> {
        None
    }

    fn is_fixpoint(&self, phi: &MpeMap) -> bool {
        phi.ones.universe() == self.ones_universe()
            && phi.zeros.universe() == self.zeros_universe()
            && self.zeros_for(&phi.ones) == phi.zeros
            && self.ones_for(&phi.zeros) == phi.ones
    }

    /// `(λρ(A), ρ(A))`, the fixpoint generated by a one-set.
    fn close_ones(&self, ones: &Subset) -> MpeMap {
        let zeros = self.zeros_for(ones);
        MpeMap { ones: self.ones_for(&zeros), zeros }
    }
}

impl PairHost for Graph {
    fn ones_universe(&self) -> usize {
        self.len()
    }

    fn zeros_universe(&self) -> usize {
        self.len()
    }

    fn zeros_for(&self, ones: &Subset) -> Subset {
        self.rho(ones)
    }

    fn ones_for(&self, zeros: &Subset) -> Subset {
        self.lambda(zeros)
    }

    fn ones_name(&self, i: usize) -> String {
        self.name(i).to_string()
    }

    fn zeros_name(&self, j: usize) -> String {
        self.name(j).to_string()
    }

    fn subbasis(&self) -> Option<&Subbasis> {
        Graph::subbasis(self)
    }

    fn as_graph(&self) -> Option<&Graph> {
        Some(self)
    }
}

/// An embedding of a lattice into a completion, by element index.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub lattice: Arc<Lattice>,
    pub map: Vec<usize>,
}

/// A finite complete lattice of fixpoint pairs ordered by inclusion of one-sets.
#[derive(Clone, Debug)]
pub struct Completion {
    host: Arc<dyn PairHost>,
    elements: Vec<MpeMap>,
    by_ones: HashMap<Subset, usize>,
    order: Lattice,
    embedding: Option<Embedding>,
}

impl Completion {
    /// Builds the completion from an explicit element list, checking that
    /// every element is a fixpoint, that elements are ordered antisymmetrically,
    /// and that the `e^∧`/`e^∨` formulas give the order-theoretic meet and join.
    pub fn from_elements(name: &str, host: Arc<dyn PairHost>, mut elements: Vec<MpeMap>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if let Some(bad) = elements.iter().find(|phi| !host.is_fixpoint(phi)) {
            return Err(Error::NotAnMpe(format!("{bad:?} is not a fixpoint pair")));
        }
        let mut by_ones = HashMap::new();
        let mut zero_sets = HashMap::new();
        for (i, phi) in elements.iter().enumerate() {
            if by_ones.insert(phi.ones.clone(), i).is_some() || zero_sets.insert(phi.zeros.clone(), i).is_some() {
                return Err(Error::NotAPoset(format!("two completion elements share a one-set or zero-set: {phi:?}")));
            }
        }
        let leq = elements
            .iter()
            .map(|a| elements.iter().map(|b| a.ones.is_subset(&b.ones)).collect())
            .collect();
        let names = (0..elements.len()).map(|i| format!("c{i}")).collect();
        let mut order = Lattice::build(name, names, OrderInput::Leq(leq))?;
        order.set_name(name);
        let c = Completion { host, elements, by_ones, order, embedding: None };
        c.verify_tables()?;
        Ok(c)
    }

    /// Fixpoints generated by `∅` and by singletons, closed under binary
    /// `e^∧` and `e^∨`. Every fixpoint is a join of singleton closures, so
    /// nothing is missed.
    pub fn enumerate(name: &str, host: Arc<dyn PairHost>) -> Result<Self> {
        let m = host.ones_universe();
        let mut found: BTreeMap<Subset, MpeMap> = BTreeMap::new();
        let mut seeds = vec![Subset::empty(m)];
        seeds.extend((0..m).map(|x| Subset::singleton(m, x)));
        for s in seeds {
            let phi = host.close_ones(&s);
            found.insert(phi.ones.clone(), phi);
        }
        loop {
            let current: Vec<MpeMap> = found.values().cloned().collect();
            let before = found.len();
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    let meet = meet_pair(host.as_ref(), a, b);
                    let join = join_pair(host.as_ref(), a, b);
                    found.entry(meet.ones.clone()).or_insert(meet);
                    found.entry(join.ones.clone()).or_insert(join);
                }
            }
            if found.len() == before {
                break;
            }
        }
        Completion::from_elements(name, host, found.into_values().collect())
    }

    fn verify_tables(&self) -> Result<()> {
        for i in 0..self.len() {
            for j in 0..self.len() {
                let (a, b) = (&self.elements[i], &self.elements[j]);
                let meet = meet_pair(self.host.as_ref(), a, b);
                let join = join_pair(self.host.as_ref(), a, b);
                let mi = self.index_of(&meet)?;
                let ji = self.index_of(&join)?;
                if mi != self.order.meet(i, j) || ji != self.order.join(i, j) {
                    return Err(Error::NotALattice {
                        a: format!("{a:?}"),
                        b: format!("{b:?}"),
                        bound: "e^∧/e^∨ agreeing with the order",
                    });
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        self.order.name()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.order.set_name(name);
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[MpeMap] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &MpeMap {
        &self.elements[i]
    }

    pub fn host(&self) -> &Arc<dyn PairHost> {
        &self.host
    }

    pub fn graph(&self) -> Option<&Graph> {
        self.host.as_graph()
    }

    /// The completion as an abstract lattice (element names follow the embedding when set).
    pub fn order(&self) -> &Lattice {
        &self.order
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order.leq(i, j)
    }

    pub fn bot(&self) -> usize {
        self.order.bot()
    }

    pub fn top(&self) -> usize {
        self.order.top()
    }

    pub fn index_of(&self, phi: &MpeMap) -> Result<usize> {
        match self.by_ones.get(&phi.ones) {
            Some(&i) if self.elements[i] == *phi => Ok(i),
            _ => Err(Error::ElementNotInCompletion),
        }
    }

    pub fn index_of_ones(&self, ones: &Subset) -> Option<usize> {
        self.by_ones.get(ones).copied()
    }

    /// `e^∧`: ones `⋂ ones(φᵢ)`, zeros `ρ` of that; the empty meet is the top.
    pub fn mpe_meet(&self, family: &[MpeMap]) -> Result<MpeMap> {
        let mut ones = Subset::full(self.host.ones_universe());
        for phi in family {
            self.index_of(phi)?;
            ones.intersect_with(&phi.ones);
        }
        let zeros = self.host.zeros_for(&ones);
        Ok(MpeMap { ones, zeros })
    }

    /// `e^∨`: zeros `⋂ zeros(φᵢ)`, ones `λ` of that; the empty join is the bottom.
    pub fn mpe_join(&self, family: &[MpeMap]) -> Result<MpeMap> {
        let mut zeros = Subset::full(self.host.zeros_universe());
        for phi in family {
            self.index_of(phi)?;
            zeros.intersect_with(&phi.zeros);
        }
        let ones = self.host.ones_for(&zeros);
        Ok(MpeMap { ones, zeros })
    }

    pub fn meet_indices(&self, items: impl IntoIterator<Item = usize>) -> usize {
        self.order.meet_all(items)
    }

    pub fn join_indices(&self, items: impl IntoIterator<Item = usize>) -> usize {
        self.order.join_all(items)
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    fn embedding_or_err(&self) -> Result<&Embedding> {
        self.embedding.as_ref().ok_or_else(|| Error::EmbeddingFailed("completion has no embedding".into()))
    }

    /// Installs `map` as the embedding of `lattice` after verifying it is a
    /// lattice embedding; embedded elements take the lattice's names.
    pub fn set_embedding(&mut self, lattice: Arc<Lattice>, map: Vec<usize>) -> Result<()> {
        if map.len() != lattice.len() {
            return Err(Error::EmbeddingFailed(format!("{} images for {} elements", map.len(), lattice.len())));
        }
        if let Some(&bad) = map.iter().find(|&&i| i >= self.len()) {
            return Err(Error::IndexOutOfRange { index: bad, len: self.len() });
        }
        let report = embedding_report(&self.order, &lattice, &map);
        if let Some(f) = report.first_failure() {
            return Err(Error::EmbeddingFailed(format!("{}: {}", f.condition, f.witness)));
        }
        let mut names: Vec<String> = (0..self.len()).map(|i| format!("c{i}")).collect();
        for (a, &i) in map.iter().enumerate() {
            names[i] = lattice.element_name(a).to_string();
        }
        let mut seen = std::collections::HashSet::new();
        for (i, n) in names.iter_mut().enumerate() {
            if !seen.insert(n.clone()) {
                *n = format!("{n}#{i}");
                seen.insert(n.clone());
            }
        }
        self.order.set_element_names(names);
        self.embedding = Some(Embedding { lattice, map });
        Ok(())
    }

    /// Embeds `lattice` by looking each element's image up in the completion.
    pub fn embed_with(&mut self, lattice: Arc<Lattice>, image: impl Fn(usize) -> Result<MpeMap>) -> Result<()> {
        let map = lattice.elements().map(|a| self.index_of(&image(a)?)).collect::<Result<Vec<_>>>()?;
        self.set_embedding(lattice, map)
    }

    /// Elements whose one-set is an intersection of sets `W_b`.
    pub fn filter_elements(&self) -> Result<Vec<usize>> {
        let sb = self.host.subbasis().ok_or(Error::NoSubbasis)?;
        Ok(self.hull_members(|phi| &phi.ones, &sb.w))
    }

    /// Elements whose zero-set is an intersection of sets `V_a`.
    pub fn ideal_elements(&self) -> Result<Vec<usize>> {
        let sb = self.host.subbasis().ok_or(Error::NoSubbasis)?;
        Ok(self.hull_members(|phi| &phi.zeros, &sb.v))
    }

    fn hull_members(&self, side: impl Fn(&MpeMap) -> &Subset, family: &[Subset]) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                let s = side(&self.elements[i]);
                let mut hull = Subset::full(s.universe());
                for w in family.iter().filter(|w| s.is_subset(w)) {
                    hull.intersect_with(w);
                }
                &hull == s
            })
            .collect()
    }

    /// Bounds, meets and joins preserved, and order reflected.
    pub fn check_embedding(&self) -> Result<CheckReport> {
        let e = self.embedding_or_err()?;
        Ok(embedding_report(&self.order, &e.lattice, &e.map))
    }

    /// Every element is the join of the meets of embedded filters below it
    /// and the meet of the joins of embedded ideals above it; also every
    /// element is a join of meets and a meet of joins of embedded elements.
    pub fn check_density(&self) -> Result<CheckReport> {
        let e = self.embedding_or_err()?;
        let l = &e.lattice;
        let mut report = CheckReport::new(format!("density of {}", self.name()));
        let filter_meets: Vec<usize> = l
            .elements()
            .map(|a| self.meet_indices(l.up(a).iter().map(|x| e.map[x])))
            .collect();
        let ideal_joins: Vec<usize> = l
            .elements()
            .map(|a| self.join_indices(l.down(a).iter().map(|x| e.map[x])))
            .collect();
        let meet_closure = closure_under(&self.order, &e.map, true);
        let join_closure = closure_under(&self.order, &e.map, false);
        for phi in 0..self.len() {
            let below = self.join_indices(filter_meets.iter().copied().filter(|&m| self.leq(m, phi)));
            report.check(below == phi, "join of filter meets below φ is φ", || json!({"element": phi, "got": below}));
            let above = self.meet_indices(ideal_joins.iter().copied().filter(|&j| self.leq(phi, j)));
            report.check(above == phi, "meet of ideal joins above φ is φ", || json!({"element": phi, "got": above}));
            let jm = self.join_indices(meet_closure.iter().copied().filter(|&m| self.leq(m, phi)));
            report.check(jm == phi, "φ is a join of meets", || json!({"element": phi, "got": jm}));
            let mj = self.meet_indices(join_closure.iter().copied().filter(|&j| self.leq(phi, j)));
            report.check(mj == phi, "φ is a meet of joins", || json!({"element": phi, "got": mj}));
        }
        Ok(report)
    }

    /// For subset pairs `A, B ⊆ L` with `⋀e(A) ≤ ⋁e(B)`, finds minimal
    /// `A′ ⊆ A`, `B′ ⊆ B` that still satisfy the inequality and checks the
    /// lattice-side inequality `⋀A ≤ ⋁B` agrees. Exhaustive for small
    /// lattices, seeded sampling beyond.
    pub fn check_compactness(&self, seed: u64) -> Result<CheckReport> {
        let e = self.embedding_or_err()?;
        let l = &e.lattice;
        let n = l.len();
        let mut report = CheckReport::new(format!("compactness of {}", self.name()));
        let mut run = |a: &Subset, b: &Subset| {
            let ea: Vec<usize> = a.iter().map(|x| e.map[x]).collect();
            let eb: Vec<usize> = b.iter().map(|x| e.map[x]).collect();
            let ma = self.meet_indices(ea.iter().copied());
            let jb = self.join_indices(eb.iter().copied());
            let holds = self.leq(ma, jb);
            let holds_l = l.leq(l.meet_all(a.iter()), l.join_all(b.iter()));
            report.check(holds == holds_l, "⋀e(A) ≤ ⋁e(B) iff ⋀A ≤ ⋁B", || {
                json!({"A": a.to_vec(), "B": b.to_vec(), "completion": holds, "lattice": holds_l})
            });
            if holds {
                let (a2, b2) = self.shrink_witness(ea, eb);
                let ok = self.leq(self.meet_indices(a2.iter().copied()), self.join_indices(b2.iter().copied()));
                report.check(ok, "finite sub-witnesses A′ ⊆ A, B′ ⊆ B", || {
                    json!({"A": a.to_vec(), "B": b.to_vec(), "A'": a2, "B'": b2})
                });
            }
        };
        if n <= COMPACTNESS_EXHAUSTIVE_LIMIT {
            let subsets: Vec<Subset> = all_subsets(n).collect();
            for a in &subsets {
                for b in &subsets {
                    run(a, b);
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..COMPACTNESS_SAMPLES {
                let a = Subset::filter(n, |_| rng.gen_bool(0.5));
                let b = Subset::filter(n, |_| rng.gen_bool(0.5));
                run(&a, &b);
            }
        }
        Ok(report)
    }

    /// Greedily drops members while the inequality survives.
    fn shrink_witness(&self, mut a: Vec<usize>, mut b: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
        let holds = |a: &[usize], b: &[usize]| {
            self.leq(self.meet_indices(a.iter().copied()), self.join_indices(b.iter().copied()))
        };
        let mut i = 0;
        while i < a.len() {
            let mut trial = a.clone();
            trial.remove(i);
            if holds(&trial, &b) {
                a = trial;
            } else {
                i += 1;
            }
        }
        let mut j = 0;
        while j < b.len() {
            let mut trial = b.clone();
            trial.remove(j);
            if holds(&a, &trial) {
                b = trial;
            } else {
                j += 1;
            }
        }
        (a, b)
    }

    pub fn to_record(&self) -> CompletionRecord {
        let names = |s: &Subset, f: &dyn Fn(usize) -> String| s.iter().map(f).collect::<Vec<_>>();
        CompletionRecord {
            name: self.name().to_string(),
            size: self.len(),
            elements: self
                .elements
                .iter()
                .enumerate()
                .map(|(i, phi)| ElementRecord {
                    name: self.order.element_name(i).to_string(),
                    ones: names(&phi.ones, &|x| self.host.ones_name(x)),
                    zeros: names(&phi.zeros, &|x| self.host.zeros_name(x)),
                })
                .collect(),
            leq: (0..self.len())
                .flat_map(|i| (0..self.len()).filter(move |&j| self.leq(i, j)).map(move |j| [i, j]))
                .collect(),
            embedding: self.embedding.as_ref().map(|e| {
                e.lattice
                    .elements()
                    .map(|a| EmbeddingRecord { element: e.lattice.element_name(a).to_string(), image: e.map[a] })
                    .collect()
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("serializable")
    }

    /// Hasse diagram of the completion.
    pub fn to_dot(&self) -> String {
        lattice_to_dot(&self.order)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementRecord {
    pub name: String,
    pub ones: Vec<String>,
    pub zeros: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingRecord {
    pub element: String,
    pub image: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletionRecord {
    pub name: String,
    pub size: usize,
    pub elements: Vec<ElementRecord>,
    /// All pairs `[i, j]` with element `i` below element `j`.
    pub leq: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<EmbeddingRecord>>,
}

fn meet_pair(host: &dyn PairHost, a: &MpeMap, b: &MpeMap) -> MpeMap {
    let ones = a.ones.intersection(&b.ones);
    MpeMap { zeros: host.zeros_for(&ones), ones }
}

fn join_pair(host: &dyn PairHost, a: &MpeMap, b: &MpeMap) -> MpeMap {
    let zeros = a.zeros.intersection(&b.zeros);
    MpeMap { ones: host.ones_for(&zeros), zeros }
}

/// Closure of the embedded image under binary meets (or joins), including the empty one.
fn closure_under(order: &Lattice, image: &[usize], meets: bool) -> Vec<usize> {
    let mut set: std::collections::BTreeSet<usize> = image.iter().copied().collect();
    set.insert(if meets { order.top() } else { order.bot() });
    loop {
        let cur: Vec<usize> = set.iter().copied().collect();
        let before = set.len();
        for &x in &cur {
            for &y in &cur {
                set.insert(if meets { order.meet(x, y) } else { order.join(x, y) });
            }
        }
        if set.len() == before {
            return cur;
        }
    }
}

fn embedding_report(order: &Lattice, l: &Lattice, map: &[usize]) -> CheckReport {
    let mut report = CheckReport::new(format!("embedding of {}", l.name()));
    report.check(map[l.bot()] == order.bot(), "bottom preserved", || json!({"image": map[l.bot()]}));
    report.check(map[l.top()] == order.top(), "top preserved", || json!({"image": map[l.top()]}));
    for a in l.elements() {
        for b in l.elements() {
            report.check(order.meet(map[a], map[b]) == map[l.meet(a, b)], "meet preserved", || json!({"a": a, "b": b}));
            report.check(order.join(map[a], map[b]) == map[l.join(a, b)], "join preserved", || json!({"a": a, "b": b}));
            report.check(order.leq(map[a], map[b]) == l.leq(a, b), "order reflected", || json!({"a": a, "b": b}));
        }
    }
    report
}

/// `C(X)` for a reflexive graph.
pub fn enumerate_mpe(graph: Arc<Graph>) -> Result<Completion> {
    if let Some(x) = graph.first_missing_loop() {
        return Err(Error::NonReflexiveGraph(x));
    }
    Completion::enumerate("C(X)", graph)
}

/// Extends an E-consistent seed to a maximal E-preserving map by the
/// `λρ`-closure of its one-set. The result keeps the seed's zeros because
/// every zero is already outside `ρ(ones)`'s complement. Distinct maximal
/// extensions may exist; this one is the one with the smallest one-set.
pub fn extend_partial(graph: &Graph, ones: &Subset, zeros: &Subset) -> Result<MpeMap> {
    for x in ones.iter() {
        if let Some(y) = zeros.iter().find(|&y| graph.has_edge(x, y)) {
            return Err(Error::InconsistentSeed { from: x, to: y });
        }
    }
    if let Some(x) = graph.first_missing_loop() {
        return Err(Error::NonReflexiveGraph(x));
    }
    Ok(graph.close_ones(ones))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::corpus;
    use crate::partial_hom::PartialHom;
    use proptest::prelude::*;

    fn set(m: usize, xs: &[usize]) -> Subset {
        Subset::from_indices(m, xs.iter().copied())
    }

    fn d_chain3() -> Arc<Graph> {
        let l = corpus("chain(3)").unwrap();
        let labels = vec![PartialHom::principal(&l, 1, 0), PartialHom::principal(&l, 2, 1)];
        Arc::new(Graph::from_partial_homs(&l, labels))
    }

    #[test]
    fn isolated_loops_give_the_four_element_boolean_lattice() {
        let c = enumerate_mpe(Arc::new(Graph::reflexive(2, &[]))).unwrap();
        assert_eq!(c.len(), 4);
        let ones: Vec<Vec<usize>> = c.elements().iter().map(|p| p.ones().to_vec()).collect();
        assert_eq!(ones, vec![vec![], vec![0], vec![0, 1], vec![1]]);
        assert!(c.order().is_distributive());
        let x = c.element(1).clone();
        let y = c.element(3).clone();
        let m = c.mpe_meet(&[x, y]).unwrap();
        assert!(m.ones().is_empty());
        assert_eq!(m.zeros().to_vec(), vec![0, 1]);
    }

    #[test]
    fn d_chain3_completion_is_a_three_chain() {
        let c = enumerate_mpe(d_chain3()).unwrap();
        let ones: Vec<Vec<usize>> = c.elements().iter().map(|p| p.ones().to_vec()).collect();
        assert_eq!(ones, vec![vec![], vec![0], vec![0, 1]]);
        assert!(c.leq(0, 1) && c.leq(1, 2));
        // the join of the images of 0 and a is the image of a
        let j = c.mpe_join(&[c.element(0).clone(), c.element(1).clone()]).unwrap();
        assert_eq!(&j, c.element(1));
    }

    #[test]
    fn single_loop_has_two_maps() {
        let c = enumerate_mpe(Arc::new(Graph::reflexive(1, &[]))).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.elements().iter().all(MpeMap::is_total));
    }

    #[test]
    fn empty_family_conventions() {
        let c = enumerate_mpe(d_chain3()).unwrap();
        assert_eq!(c.index_of(&c.mpe_meet(&[]).unwrap()).unwrap(), c.top());
        assert_eq!(c.index_of(&c.mpe_join(&[]).unwrap()).unwrap(), c.bot());
    }

    #[test]
    fn foreign_element_rejected() {
        let c = enumerate_mpe(d_chain3()).unwrap();
        let stranger = MpeMap::new(set(2, &[1]), set(2, &[]));
        assert!(matches!(c.mpe_meet(&[stranger]), Err(Error::ElementNotInCompletion)));
    }

    #[test]
    fn non_reflexive_graph_rejected() {
        let g = Graph::from_matrix(&[vec![true, false], vec![false, false]]);
        assert!(matches!(enumerate_mpe(Arc::new(g)), Err(Error::NonReflexiveGraph(1))));
    }

    #[test]
    fn extend_partial_examples() {
        // the λρ-closure of the empty seed on a single loop is constant 0
        let g = Graph::reflexive(1, &[]);
        let phi = extend_partial(&g, &set(1, &[]), &set(1, &[])).unwrap();
        assert_eq!(phi.zeros().to_vec(), vec![0]);
        let d = d_chain3();
        let phi = extend_partial(&d, &set(2, &[0]), &set(2, &[])).unwrap();
        assert_eq!((phi.ones().to_vec(), phi.zeros().to_vec()), (vec![0], vec![1]));
        let e = Graph::reflexive(2, &[(0, 1)]);
        assert!(matches!(
            extend_partial(&e, &set(2, &[0]), &set(2, &[1])),
            Err(Error::InconsistentSeed { from: 0, to: 1 })
        ));
    }

    #[test]
    fn subbasis_required_for_filter_elements() {
        let c = enumerate_mpe(Arc::new(Graph::reflexive(2, &[]))).unwrap();
        assert!(matches!(c.filter_elements(), Err(Error::NoSubbasis)));
        let c = enumerate_mpe(d_chain3()).unwrap();
        assert_eq!(c.filter_elements().unwrap(), vec![0, 1, 2]);
        assert_eq!(c.ideal_elements().unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn density_and_compactness_on_d_chain3() {
        let l = Arc::new(corpus("chain(3)").unwrap());
        let mut c = enumerate_mpe(d_chain3()).unwrap();
        assert!(c.check_density().is_err());
        c.set_embedding(l, vec![0, 1, 2]).unwrap();
        assert!(c.check_embedding().unwrap().passed());
        assert!(c.check_density().unwrap().passed());
        let r = c.check_compactness(0).unwrap();
        assert!(r.passed());
        assert!(r.cases > 64);
        assert_eq!(c.order().names(), &["0", "a", "1"]);
    }

    #[test]
    fn bad_embedding_rejected() {
        let l = Arc::new(corpus("chain(3)").unwrap());
        let mut c = enumerate_mpe(d_chain3()).unwrap();
        assert!(matches!(c.set_embedding(l, vec![0, 2, 1]), Err(Error::EmbeddingFailed(_))));
    }

    #[test]
    fn export_formats() {
        let c = enumerate_mpe(d_chain3()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(v["size"], 3);
        assert_eq!(v["leq"].as_array().unwrap().len(), 6);
        assert_eq!(c.to_dot().matches("arrowhead=none").count(), 2);
    }

    fn reflexive_graph(max: usize) -> impl Strategy<Value = Graph> {
        (1..=max).prop_flat_map(|m| {
            proptest::collection::vec(proptest::bool::weighted(0.35), m * m).prop_map(move |bits| {
                let rel: Vec<Vec<bool>> =
                    (0..m).map(|i| (0..m).map(|j| i == j || bits[i * m + j]).collect()).collect();
                Graph::from_matrix(&rel)
            })
        })
    }

    proptest! {
        #[test]
        fn enumerated_maps_are_disjoint_fixpoints(g in reflexive_graph(7)) {
            let c = enumerate_mpe(Arc::new(g.clone())).unwrap();
            for phi in c.elements() {
                prop_assert!(phi.ones().is_disjoint(phi.zeros()));
                prop_assert_eq!(&g.rho(phi.ones()), phi.zeros());
                prop_assert_eq!(&g.lambda(phi.zeros()), phi.ones());
                for x in phi.ones().iter() {
                    for y in phi.zeros().iter() {
                        prop_assert!(!g.has_edge(x, y));
                    }
                }
            }
        }

        #[test]
        fn meets_and_joins_extend_pointwise_maps(g in reflexive_graph(6), pick in any::<u64>()) {
            let c = enumerate_mpe(Arc::new(g)).unwrap();
            let family: Vec<MpeMap> =
                (0..c.len()).filter(|i| pick >> (i % 64) & 1 == 1).map(|i| c.element(i).clone()).collect();
            let meet = c.mpe_meet(&family).unwrap();
            let join = c.mpe_join(&family).unwrap();
            for phi in &family {
                prop_assert!(phi.zeros().is_subset(meet.zeros()));
                prop_assert!(phi.ones().is_subset(join.ones()));
            }
            let idx: Vec<usize> = family.iter().map(|p| c.index_of(p).unwrap()).collect();
            prop_assert_eq!(c.index_of(&meet).unwrap(), c.meet_indices(idx.iter().copied()));
            prop_assert_eq!(c.index_of(&join).unwrap(), c.join_indices(idx.iter().copied()));
        }

        #[test]
        fn extensions_contain_their_seed(g in reflexive_graph(6), seed in any::<u64>()) {
            let m = g.len();
            let ones = Subset::filter(m, |i| seed >> i & 1 == 1);
            let zeros = g.rho(&ones).intersection(&Subset::filter(m, |i| seed >> (i + 8) & 1 == 1));
            let phi = extend_partial(&g, &ones, &zeros).unwrap();
            prop_assert!(ones.is_subset(phi.ones()));
            prop_assert!(zeros.is_subset(phi.zeros()));
            prop_assert!(g.is_fixpoint(&phi));
        }
    }
}
