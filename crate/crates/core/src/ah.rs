//! The graph of all special partial homomorphisms `D̄♭(L)`, the isomorphism
//! `Ψ` between its completion and that of `D♭(L)`, and the action on
//! homomorphisms: `u: L → K` yields an L-graph morphism
//! `D̄♭(u): D̄♭(K) → D̄♭(L)`, `f ↦ f∘u`, and composing maximal maps with that
//! morphism gives a complete homomorphism `L^δ → K^δ` extending `u`.
//!
//! Unlike maximal partial homomorphisms, special ones are closed under
//! precomposition with homomorphisms: preimages of filters and ideals are
//! filters and ideals.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{check_lgraph_morphism, is_e_preserving, Graph};
use crate::lattice::{Lattice, LatticeHom};
use crate::mpe::{enumerate_mpe, Completion, MpeMap, PairHost};
use crate::partial_hom::PartialHom;
use crate::ploscica::{build_d, evaluation};
use crate::report::CheckReport;
use crate::subset::{all_subsets, Subset};

/// Completions up to this size get exhaustive meet/join preservation checks.
pub const COMPLETE_HOM_EXHAUSTIVE_LIMIT: usize = 10;
/// Sampled subfamilies per check beyond that size.
pub const COMPLETE_HOM_SAMPLES: usize = 1000;

/// All `(↑a, ↓b)` with `a ≰ b`, in canonical order.
pub fn enumerate_sph(l: &Lattice) -> Vec<PartialHom> {
    let mut out: Vec<PartialHom> = l
        .elements()
        .flat_map(|a| l.elements().map(move |b| (a, b)))
        .filter(|&(a, b)| !l.leq(a, b))
        .map(|(a, b)| PartialHom::principal(l, a, b))
        .collect();
    out.sort();
    out
}

/// `D̄♭(L)`: the labeled graph over `enumerate_sph(L)`.
pub fn build_dbar(l: &Lattice) -> Graph {
    Graph::from_partial_homs(l, enumerate_sph(l))
}

/// `ē_a` over `D̄♭(L)`: ones `W_a`, zeros `V_a`.
pub fn evaluation_bar(dbar: &Graph, a: usize) -> Result<MpeMap> {
    evaluation(dbar, a)
}

/// `D♭(L)` and `D̄♭(L)` side by side, with each maximal vertex located
/// among the special ones. The maximal vertices form a mask on `D̄♭(L)`,
/// kept in the canonical vertex order rather than as a prefix.
#[derive(Clone, Debug)]
pub struct DualPair {
    lattice: Arc<Lattice>,
    x: Arc<Graph>,
    y: Arc<Graph>,
    x_to_y: Vec<usize>,
    mph_mask: Subset,
}

impl DualPair {
    pub fn new(lattice: Arc<Lattice>) -> Self {
        let x = build_d(&lattice);
        let y = build_dbar(&lattice);
        let position: HashMap<&PartialHom, usize> =
            y.labels().unwrap().iter().enumerate().map(|(i, f)| (f, i)).collect();
        let x_to_y: Vec<usize> = x.labels().unwrap().iter().map(|f| position[f]).collect();
        let mph_mask = Subset::from_indices(y.len(), x_to_y.iter().copied());
        DualPair { lattice, x: Arc::new(x), y: Arc::new(y), x_to_y, mph_mask }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn x(&self) -> &Arc<Graph> {
        &self.x
    }

    pub fn y(&self) -> &Arc<Graph> {
        &self.y
    }

    pub fn x_to_y(&self) -> &[usize] {
        &self.x_to_y
    }

    pub fn mph_mask(&self) -> &Subset {
        &self.mph_mask
    }

    /// `Ψ(φ)`: ones are the special vertices with no edge into `zeros(φ)`;
    /// zeros are the vertices `f` such that no vertex satisfying that
    /// condition has an edge to `f`.
    pub fn psi(&self, phi: &MpeMap) -> Result<MpeMap> {
        if !self.x.is_fixpoint(phi) {
            return Err(Error::NotAnMpe(format!("{phi:?} over the maximal graph")));
        }
        let y = &self.y;
        let zg = phi.zeros().image(&self.x_to_y, y.len());
        let ones = Subset::filter(y.len(), |f| zg.iter().all(|g| !y.has_edge(f, g)));
        let zeros = Subset::filter(y.len(), |f| y.vertices().all(|h| !ones.contains(h) || !y.has_edge(h, f)));
        assert_eq!(zeros, y.rho(&ones), "Ψ zero-clause agrees with ρ of the one-set");
        let eta = MpeMap::new(ones, zeros);
        if !y.is_fixpoint(&eta) {
            return Err(Error::NotAnMpe(format!("Ψ image {eta:?}")));
        }
        if !phi.ones().image(&self.x_to_y, y.len()).is_subset(eta.ones()) {
            return Err(Error::NotAnMpe(format!("Ψ image {eta:?} does not extend its argument")));
        }
        Ok(eta)
    }

    /// Restriction of an MPE over `D̄♭(L)` to the maximal vertices.
    pub fn restrict_to_mph(&self, eta: &MpeMap) -> Result<MpeMap> {
        if !self.y.is_fixpoint(eta) {
            return Err(Error::NotAnMpe(format!("{eta:?} over the special graph")));
        }
        let phi = MpeMap::new(eta.ones().preimage(&self.x_to_y), eta.zeros().preimage(&self.x_to_y));
        if !self.x.is_fixpoint(&phi) {
            return Err(Error::NotAnMpe(format!("restriction {phi:?}")));
        }
        Ok(phi)
    }

    /// `Ψ` is an order-isomorphism `C(D♭(L)) → C(D̄♭(L))` inverse to
    /// restriction and sending `e_a` to `ē_a`.
    pub fn check_iso_xy(&self) -> Result<CheckReport> {
        let cx = enumerate_mpe(self.x.clone())?;
        let cy = enumerate_mpe(self.y.clone())?;
        let mut report = CheckReport::new(format!("Ψ isomorphism for {}", self.lattice.name()));
        report.check(cx.len() == cy.len(), "equal completion sizes", || json!([cx.len(), cy.len()]));
        let mut image = Vec::with_capacity(cx.len());
        for phi in cx.elements() {
            let eta = self.psi(phi)?;
            let j = cy.index_of(&eta)?;
            image.push(j);
            let back = self.restrict_to_mph(&eta)?;
            report.check(&back == phi, "restrict(Ψ(φ)) = φ", || json!({"phi": format!("{phi:?}")}));
        }
        let mut hit = vec![false; cy.len()];
        for &j in &image {
            hit[j] = true;
        }
        report.check(hit.iter().all(|&b| b), "Ψ is onto", || json!(image));
        for i in 0..cx.len() {
            for k in 0..cx.len() {
                report.check(cx.leq(i, k) == cy.leq(image[i], image[k]), "Ψ preserves and reflects order", || {
                    json!({"i": i, "k": k})
                });
            }
        }
        for eta in cy.elements() {
            let phi = self.restrict_to_mph(eta)?;
            report.check(&self.psi(&phi)? == eta, "Ψ(restrict(η)) = η", || json!({"eta": format!("{eta:?}")}));
        }
        for a in self.lattice.elements() {
            let ea = evaluation(&self.x, a)?;
            let eba = evaluation_bar(&self.y, a)?;
            report.check(self.psi(&ea)? == eba, "Ψ(e_a) = ē_a", || json!({"a": self.lattice.element_name(a)}));
            report.check(self.restrict_to_mph(&eba)? == ea, "restriction of ē_a is e_a", || {
                json!({"a": self.lattice.element_name(a)})
            });
        }
        Ok(report)
    }
}

/// A map between labeled graphs certified against the L-graph morphism conditions.
#[derive(Clone, Debug)]
pub struct LGraphMorphism {
    src: Arc<Graph>,
    dst: Arc<Graph>,
    map: Vec<usize>,
}

impl LGraphMorphism {
    pub fn certify(src: Arc<Graph>, dst: Arc<Graph>, map: Vec<usize>) -> Result<Self> {
        let report = check_lgraph_morphism(&src, &dst, &map)?;
        if let Some(f) = report.first_failure() {
            return Err(Error::HomInvalid(format!("{}: {}", f.condition, f.witness)));
        }
        debug_assert!(is_e_preserving(&src, &dst, &map));
        Ok(LGraphMorphism { src, dst, map })
    }

    pub fn identity(g: Arc<Graph>) -> Self {
        let map = g.vertices().collect();
        LGraphMorphism { src: g.clone(), dst: g, map }
    }

    pub fn src(&self) -> &Arc<Graph> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Graph> {
        &self.dst
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_e_preserving(&self) -> bool {
        is_e_preserving(&self.src, &self.dst, &self.map)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LGraphMorphism) -> Result<LGraphMorphism> {
        if self.dst.len() != next.src.len() || self.dst.labels() != next.src.labels() {
            return Err(Error::HomInvalid("morphisms are not composable".into()));
        }
        let map = self.map.iter().map(|&x| next.map[x]).collect();
        Ok(LGraphMorphism { src: self.src.clone(), dst: next.dst.clone(), map })
    }
}

/// A lattice and its completion over `D̄♭(L)`, embedded by `a ↦ ē_a`.
#[derive(Clone, Debug)]
pub struct AhExtension {
    pub lattice: Arc<Lattice>,
    pub graph: Arc<Graph>,
    pub completion: Arc<Completion>,
}

impl AhExtension {
    pub fn new(lattice: Arc<Lattice>) -> Result<Self> {
        let graph = Arc::new(build_dbar(&lattice));
        let mut c = enumerate_mpe(graph.clone())?;
        c.set_name(format!("ah({})", lattice.name()));
        c.embed_with(lattice.clone(), |a| evaluation_bar(&graph, a))?;
        Ok(AhExtension { lattice, graph, completion: Arc::new(c) })
    }
}

/// The completion `C(D̄♭(L))` with `L` embedded by `a ↦ ē_a`.
pub fn canonical_extension_ah(l: &Arc<Lattice>) -> Result<Completion> {
    Ok(Arc::unwrap_or_clone(AhExtension::new(l.clone())?.completion))
}

/// `D̄♭(u)` for `u: L → K`, as a morphism from `D̄♭(K)` (`dbar_k`) to
/// `D̄♭(L)` (`dbar_l`), certified against the L-graph morphism conditions.
pub fn dbar_on_hom(u: &LatticeHom, dbar_k: &Arc<Graph>, dbar_l: &Arc<Graph>) -> Result<LGraphMorphism> {
    let (Some(k_labels), Some(l_labels)) = (dbar_k.labels(), dbar_l.labels()) else {
        return Err(Error::NoQuasiOrders);
    };
    let position: HashMap<&PartialHom, usize> = l_labels.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let map = k_labels
        .iter()
        .map(|f| {
            let fu = f.compose(u);
            position
                .get(&fu)
                .copied()
                .ok_or_else(|| Error::HomInvalid(format!("{} is not a special partial homomorphism", fu.label(u.src()))))
        })
        .collect::<Result<Vec<_>>>()?;
    LGraphMorphism::certify(dbar_k.clone(), dbar_l.clone(), map)
}

/// A map between completions, checked to preserve arbitrary meets and joins.
#[derive(Clone, Debug)]
pub struct CompleteHom {
    src: Arc<Completion>,
    dst: Arc<Completion>,
    map: Vec<usize>,
}

impl CompleteHom {
    pub fn new(src: Arc<Completion>, dst: Arc<Completion>, map: Vec<usize>) -> Self {
        assert_eq!(map.len(), src.len());
        CompleteHom { src, dst, map }
    }

    pub fn src(&self) -> &Arc<Completion> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Completion> {
        &self.dst
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &CompleteHom) -> Result<CompleteHom> {
        if self.dst.len() != next.src.len() || self.dst.elements() != next.src.elements() {
            return Err(Error::HomInvalid("complete homomorphisms are not composable".into()));
        }
        let map = self.map.iter().map(|&x| next.map[x]).collect();
        Ok(CompleteHom { src: self.src.clone(), dst: next.dst.clone(), map })
    }

    /// Preservation of the meet and join of every subfamily (exhaustive up
    /// to the size limit, all pairs plus seeded samples beyond).
    pub fn check(&self, seed: u64) -> CheckReport {
        let mut report = CheckReport::new(format!("{} → {} complete homomorphism", self.src.name(), self.dst.name()));
        let n = self.src.len();
        let mut run = |s: &Subset| {
            let meet_src = self.map[self.src.meet_indices(s.iter())];
            let meet_dst = self.dst.meet_indices(s.iter().map(|x| self.map[x]));
            report.check(meet_src == meet_dst, "preserves meets", || json!({"family": s.to_vec()}));
            let join_src = self.map[self.src.join_indices(s.iter())];
            let join_dst = self.dst.join_indices(s.iter().map(|x| self.map[x]));
            report.check(join_src == join_dst, "preserves joins", || json!({"family": s.to_vec()}));
        };
        if n <= COMPLETE_HOM_EXHAUSTIVE_LIMIT {
            all_subsets(n).for_each(|s| run(&s));
        } else {
            run(&Subset::empty(n));
            for x in 0..n {
                for y in x..n {
                    run(&Subset::from_indices(n, [x, y]));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..COMPLETE_HOM_SAMPLES {
                run(&Subset::filter(n, |_| rng.gen_bool(0.5)));
            }
        }
        report
    }

    pub fn to_record(&self) -> CompleteHomRecord {
        CompleteHomRecord {
            from: self.src.name().to_string(),
            to: self.dst.name().to_string(),
            map: self.map.clone(),
            names: self
                .map
                .iter()
                .enumerate()
                .map(|(i, &j)| [self.src.order().element_name(i).to_string(), self.dst.order().element_name(j).to_string()])
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompleteHomRecord {
    pub from: String,
    pub to: String,
    /// Element-index map between the two completion files.
    pub map: Vec<usize>,
    pub names: Vec<[String; 2]>,
}

/// `Ḡ(α)`: for `α: X → Y`, sends each maximal map `φ` over `Y` (in `c_cod`)
/// to `φ∘α` over `X` (in `c_dom`). Images are not re-extended; an image
/// that is not maximal means `α` was not an L-graph morphism.
pub fn gbar_on_morphism(alpha: &LGraphMorphism, c_cod: &Arc<Completion>, c_dom: &Arc<Completion>) -> Result<CompleteHom> {
    if c_cod.host().ones_universe() != alpha.dst.len() || c_dom.host().ones_universe() != alpha.src.len() {
        return Err(Error::HomInvalid("completions do not sit over the morphism's graphs".into()));
    }
    let map = c_cod
        .elements()
        .iter()
        .enumerate()
        .map(|(i, phi)| {
            let image = MpeMap::new(phi.ones().preimage(&alpha.map), phi.zeros().preimage(&alpha.map));
            c_dom.index_of(&image).map_err(|_| Error::ImageNotMaximal(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompleteHom::new(c_cod.clone(), c_dom.clone(), map))
}

/// The lift of `u: L → K` to the canonical extensions, with its certificates.
#[derive(Clone, Debug)]
pub struct LiftedHom {
    pub alpha: LGraphMorphism,
    pub hom: CompleteHom,
    /// Restriction to `u` through the embeddings, and meet/join preservation.
    pub report: CheckReport,
}

/// `Ḡ(D̄♭(u)): L^δ → K^δ`, certified to send `ē_a` to `ē_{u(a)}` and to
/// preserve all meets and joins.
pub fn lift_hom(u: &LatticeHom, ext_l: &AhExtension, ext_k: &AhExtension, seed: u64) -> Result<LiftedHom> {
    if !u.src().same_order(&ext_l.lattice) || !u.dst().same_order(&ext_k.lattice) {
        return Err(Error::HomInvalid("extensions do not match the homomorphism's lattices".into()));
    }
    let alpha = dbar_on_hom(u, &ext_k.graph, &ext_l.graph)?;
    let hom = gbar_on_morphism(&alpha, &ext_l.completion, &ext_k.completion)?;
    let mut report = CheckReport::new(format!("lift of {} → {}", u.src().name(), u.dst().name()));
    let emb_l = &ext_l.completion.embedding().expect("embedded").map;
    let emb_k = &ext_k.completion.embedding().expect("embedded").map;
    for a in u.src().elements() {
        report.check(hom.map[emb_l[a]] == emb_k[u.apply(a)], "lift sends ē_a to ē_u(a)", || {
            json!({"a": u.src().element_name(a), "u(a)": u.dst().element_name(u.apply(a))})
        });
    }
    report.absorb(hom.check(seed));
    Ok(LiftedHom { alpha, hom, report })
}

/// `lift_hom` with freshly built extensions of the source and target.
pub fn lift_hom_fresh(u: &LatticeHom, seed: u64) -> Result<LiftedHom> {
    let ext_l = AhExtension::new(u.src().clone())?;
    let ext_k = AhExtension::new(u.dst().clone())?;
    lift_hom(u, &ext_l, &ext_k, seed)
}
