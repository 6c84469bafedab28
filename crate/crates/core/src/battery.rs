//! Property batteries run over the lattice corpus. Each returns a single
//! [`CheckReport`] whose failures carry replayable witnesses.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::ah::{dbar_on_hom, lift_hom, AhExtension, DualPair, LGraphMorphism};
use crate::error::Result;
use crate::graph::{is_e_preserving, Graph};
use crate::lattice::{standard_corpus, CorpusEntry, Lattice, LatticeHom};
use crate::mpe::{enumerate_mpe, Completion, MpeMap};
use crate::oracle::{brute_force_mpe, brute_force_mph, gh_extension, iso_fixing_l};
use crate::ploscica::{build_d, canonical_extension_ploscica, enumerate_mph, evaluation, reproduce_composition_failure};
use crate::report::CheckReport;
use crate::subset::{all_subsets, Subset};

/// Graphs up to this many vertices get the exhaustive partial L-graph
/// morphism scan over all one-sets.
pub const LGRAPH_SCAN_LIMIT: usize = 14;

fn corpus_arcs(max_size: usize, seed: u64) -> Vec<(String, Arc<Lattice>)> {
    standard_corpus(max_size, seed).into_iter().map(|CorpusEntry { spec, lattice }| (spec, Arc::new(lattice))).collect()
}

/// Both constructions have `|L|` elements, as does the polarity completion,
/// and all three are pairwise isomorphic over `L`.
pub fn self_extension_battery(max_size: usize, seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("finite self-extension");
    for (spec, l) in corpus_arcs(max_size, seed) {
        let p = canonical_extension_ploscica(&l)?;
        let a = AhExtension::new(l.clone())?.completion;
        let g = gh_extension(&l)?;
        for c in [&p, a.as_ref(), &g] {
            report.check(c.len() == l.len(), "completion has |L| elements", || {
                json!({"lattice": spec, "completion": c.name(), "size": c.len()})
            });
        }
        for (x, y) in [(&p, a.as_ref()), (&p, &g), (a.as_ref(), &g)] {
            let iso = iso_fixing_l(x, y)?;
            report.check(iso.is_some(), "isomorphism fixing L", || json!({"lattice": spec, "left": x.name(), "right": y.name()}));
        }
    }
    Ok(report)
}

/// Density and compactness of all three constructions.
pub fn density_battery(max_size: usize, seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("density and compactness");
    for (spec, l) in corpus_arcs(max_size, seed) {
        let p = canonical_extension_ploscica(&l)?;
        let a = AhExtension::new(l.clone())?.completion;
        let g = gh_extension(&l)?;
        for c in [&p, a.as_ref(), &g] {
            let mut sub = c.check_density()?;
            sub.name = format!("{spec} {}", sub.name);
            report.absorb(sub);
            let mut sub = c.check_compactness(seed)?;
            sub.name = format!("{spec} {}", sub.name);
            report.absorb(sub);
        }
    }
    Ok(report)
}

/// `Ψ` is an isomorphism over `L` for every corpus lattice.
pub fn psi_battery(max_size: usize, seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("Ψ isomorphism");
    for (_, l) in corpus_arcs(max_size, seed) {
        report.absorb(DualPair::new(l).check_iso_xy()?);
    }
    Ok(report)
}

/// The composition counterexample on the maximal side, and closure of
/// special partial homomorphisms under the same composition.
pub fn composition_battery() -> Result<CheckReport> {
    let (_, mut report) = reproduce_composition_failure()?;
    let chain = Arc::new(crate::lattice::corpus("chain(3)")?);
    let m3 = Arc::new(crate::lattice::corpus("M3")?);
    let u = LatticeHom::from_names(chain.clone(), m3.clone(), &[("0", "0"), ("a", "b"), ("1", "1")])?;
    let gk = Arc::new(crate::ah::build_dbar(&m3));
    let gl = Arc::new(crate::ah::build_dbar(&chain));
    let alpha = dbar_on_hom(&u, &gk, &gl);
    report.check(alpha.is_ok(), "D̄♭(u) is an L-graph morphism", || json!(alpha.as_ref().err().map(|e| e.to_string())));
    if let Ok(alpha) = alpha {
        for (f, &img) in gk.labels().unwrap().iter().zip(alpha.map()) {
            let g = &gl.labels().unwrap()[img];
            let ok = g == &f.compose(&u) && g.is_special(&chain) && g.is_partial_hom(&chain);
            report.check(ok, "f∘u is a special partial homomorphism", || json!({"f": f.label(&m3), "image": g.label(&chain)}));
        }
    }
    Ok(report)
}

/// For distributive lattices every maximal partial homomorphism is total
/// and `E` on `D♭(L)` is antisymmetric.
pub fn distributive_battery(max_size: usize, seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("distributive specialization");
    for (spec, l) in corpus_arcs(max_size, seed).into_iter().filter(|(_, l)| l.is_distributive()) {
        let mph = enumerate_mph(&l);
        for f in &mph {
            report.check(f.domain().is_full(), "MPH is total", || json!({"lattice": spec, "mph": f.label(&l)}));
        }
        let d = build_d(&l);
        for x in d.vertices() {
            for y in d.vertices() {
                if x != y {
                    report.check(!(d.has_edge(x, y) && d.has_edge(y, x)), "E antisymmetric", || {
                        json!({"lattice": spec, "f": d.name(x), "g": d.name(y)})
                    });
                }
                // on total maps E is the pointwise order
                let pointwise = l.elements().all(|a| mph[x].value(a) <= mph[y].value(a));
                report.check(d.has_edge(x, y) == pointwise, "E is the pointwise order", || {
                    json!({"lattice": spec, "f": d.name(x), "g": d.name(y)})
                });
            }
        }
    }
    Ok(report)
}

/// `enumerate_mpe` against the definitional brute force: every reflexive
/// digraph on up to 4 vertices, then `random_graphs` seeded digraphs on up
/// to `max_m` vertices. Also checks pair-maximality of MPHs against the
/// brute-force partial homomorphism scan.
pub fn oracle_battery(seed: u64, random_graphs: usize, max_m: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("oracle equivalence");
    let compare = |g: &Graph, report: &mut CheckReport| -> Result<()> {
        let brute = brute_force_mpe(g)?;
        let fast = enumerate_mpe(Arc::new(g.clone()))?.elements().to_vec();
        report.check(brute == fast, "fixpoint enumeration equals brute-force MPE scan", || {
            json!({"edges": edge_list(g), "brute": brute.len(), "fixpoints": fast.len()})
        });
        Ok(())
    };
    for m in 1..=4usize {
        let off: Vec<(usize, usize)> = (0..m).flat_map(|x| (0..m).map(move |y| (x, y))).filter(|(x, y)| x != y).collect();
        for mask in 0u32..(1 << off.len()) {
            let edges: Vec<(usize, usize)> =
                off.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            compare(&Graph::reflexive(m, &edges), &mut report)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_graphs {
        let m = rng.gen_range(1..=max_m);
        let p = rng.gen_range(0.1..0.7);
        let edges: Vec<(usize, usize)> =
            (0..m).flat_map(|x| (0..m).map(move |y| (x, y))).filter(|(x, y)| x != y).filter(|_| rng.gen_bool(p)).collect();
        compare(&Graph::reflexive(m, &edges), &mut report)?;
    }
    for (spec, l) in corpus_arcs(8, seed) {
        let brute = brute_force_mph(&l)?;
        report.check(brute == enumerate_mph(&l), "pair-maximal MPHs equal maximal partial homomorphisms", || {
            json!({"lattice": spec})
        });
    }
    Ok(report)
}

fn edge_list(g: &Graph) -> Vec<[usize; 2]> {
    g.vertices().flat_map(|x| g.vertices().filter(move |&y| x != y && g.has_edge(x, y)).map(move |y| [x, y])).collect()
}

/// The structural lemmas on `D♭(L)` and `D̄♭(L)` for every corpus lattice.
pub fn lemma_battery(max_size: usize, seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("lemma battery");
    for (spec, l) in corpus_arcs(max_size, seed) {
        let pair = DualPair::new(l.clone());
        let (x, y) = (pair.x().clone(), pair.y().clone());
        let cx = enumerate_mpe(x.clone())?;
        let cy = enumerate_mpe(y.clone())?;

        quasi_order_lemma(&spec, "D♭", &x, &mut report)?;
        quasi_order_lemma(&spec, "D̄♭", &y, &mut report)?;
        for (side, g, c) in [("D♭", &x, &cx), ("D̄♭", &y, &cy)] {
            fixpoint_lemma(&spec, side, g, c, &mut report);
            extension_lemma(&spec, side, c, &mut report)?;
            increasing_lemmas(&spec, side, g, c, &mut report)?;
            subbasis_lemma(&spec, side, g, c, &mut report);
            representation(&spec, side, &l, g, c, &mut report)?;
        }
        upward_witness_lemma(&spec, &x, &cx, &mut report)?;
        stable_pairs(&spec, &y, &cy, &mut report)?;
    }
    Ok(report)
}

/// `(f,g) ∈ E` iff some `h` has `f ≤₁ h`, `g ≤₂ h`; `≤₂` and `≤₁` are
/// recovered from `E`; `≤₁ ⊆ E` and `≥₂ ⊆ E`.
fn quasi_order_lemma(spec: &str, side: &str, g: &Graph, report: &mut CheckReport) -> Result<()> {
    let at = |f: usize, h: usize| json!({"lattice": spec, "graph": side, "f": g.name(f), "g": g.name(h)});
    for f in g.vertices() {
        for h in g.vertices() {
            let witness = g.witness_edge(f, h);
            report.check(witness.is_ok(), "E iff a ≤₁/≤₂ witness exists", || at(f, h));
            let le2_from_e = !g.vertices().any(|k| g.has_edge(k, h) && !g.has_edge(k, f));
            report.check(g.le2(f, h)? == le2_from_e, "≤₂ recovered from E", || at(f, h));
            let le1_from_e = !g.vertices().any(|k| g.has_edge(h, k) && !g.has_edge(f, k));
            report.check(g.le1(f, h)? == le1_from_e, "≤₁ recovered from E", || at(f, h));
            if g.le1(f, h)? {
                report.check(g.has_edge(f, h), "≤₁ ⊆ E", || at(f, h));
            }
            if g.le2(h, f)? {
                report.check(g.has_edge(f, h), "≥₂ ⊆ E", || at(f, h));
            }
        }
    }
    Ok(())
}

/// Zeros are the vertices with no edge from a one, ones the vertices with
/// no edge to a zero, and no edge runs from a one to a zero.
fn fixpoint_lemma(spec: &str, side: &str, g: &Graph, c: &Completion, report: &mut CheckReport) {
    for phi in c.elements() {
        let at = || json!({"lattice": spec, "graph": side, "phi": format!("{phi:?}")});
        report.check(&g.rho(phi.ones()) == phi.zeros(), "zeros = ρ(ones)", at);
        report.check(&g.lambda(phi.zeros()) == phi.ones(), "ones = λ(zeros)", at);
        let preserving = phi.ones().iter().all(|a| phi.zeros().iter().all(|b| !g.has_edge(a, b)));
        report.check(preserving, "E-preserving", at);
    }
}

/// `e^∧` extends the pointwise meet and `e^∨` the pointwise join, and both
/// agree with the order-theoretic bounds, for every subfamily.
fn extension_lemma(spec: &str, side: &str, c: &Completion, report: &mut CheckReport) -> Result<()> {
    for fam in all_subsets(c.len()) {
        let family: Vec<MpeMap> = fam.iter().map(|i| c.element(i).clone()).collect();
        let meet = c.mpe_meet(&family)?;
        let join = c.mpe_join(&family)?;
        let at = || json!({"lattice": spec, "graph": side, "family": fam.to_vec()});
        let zeros_in = family.iter().all(|p| p.zeros().is_subset(meet.zeros()));
        report.check(zeros_in, "⋃ zeros ⊆ zeros(e^∧)", at);
        let ones_in = family.iter().all(|p| p.ones().is_subset(join.ones()));
        report.check(ones_in, "⋃ ones ⊆ ones(e^∨)", at);
        report.check(c.index_of(&meet)? == c.meet_indices(fam.iter()), "e^∧ is the glb", at);
        report.check(c.index_of(&join)? == c.join_indices(fam.iter()), "e^∨ is the lub", at);
    }
    Ok(())
}

/// Ones are `≤₁`-increasing and zeros `≤₂`-increasing.
fn increasing_lemmas(spec: &str, side: &str, g: &Graph, c: &Completion, report: &mut CheckReport) -> Result<()> {
    for phi in c.elements() {
        for f in g.vertices() {
            for h in g.vertices() {
                let at = || json!({"lattice": spec, "graph": side, "phi": format!("{phi:?}"), "f": g.name(f), "g": g.name(h)});
                if g.le2(f, h)? && phi.value(f) == Some(false) {
                    report.check(phi.value(h) == Some(false), "f ≤₂ g, φ(f) = 0 ⇒ φ(g) = 0", at);
                }
                if g.le1(f, h)? && phi.value(f) == Some(true) {
                    report.check(phi.value(h) == Some(true), "f ≤₁ g, φ(f) = 1 ⇒ φ(g) = 1", at);
                }
            }
        }
    }
    Ok(())
}

/// `zeros ∩ W_a = ∅ ⇒ zeros ⊆ V_a` and `ones ∩ V_a = ∅ ⇒ ones ⊆ W_a`.
fn subbasis_lemma(spec: &str, side: &str, g: &Graph, c: &Completion, report: &mut CheckReport) {
    let sb = g.subbasis().expect("lattice-derived graph");
    for phi in c.elements() {
        for (a, (w, v)) in sb.w.iter().zip(&sb.v).enumerate() {
            let at = || json!({"lattice": spec, "graph": side, "phi": format!("{phi:?}"), "a": a});
            if phi.zeros().is_disjoint(w) {
                report.check(phi.zeros().is_subset(v), "zeros ∩ W_a = ∅ ⇒ zeros ⊆ V_a", at);
            }
            if phi.ones().is_disjoint(v) {
                report.check(phi.ones().is_subset(w), "ones ∩ V_a = ∅ ⇒ ones ⊆ W_a", at);
            }
        }
    }
}

/// On the maximal graph: outside the zeros, some one lies `≤₂`-above;
/// outside the ones, some zero lies `≤₁`-above.
fn upward_witness_lemma(spec: &str, g: &Graph, c: &Completion, report: &mut CheckReport) -> Result<()> {
    for phi in c.elements() {
        for f in g.vertices() {
            let at = || json!({"lattice": spec, "phi": format!("{phi:?}"), "f": g.name(f)});
            if !phi.zeros().contains(f) {
                let found = phi.ones().iter().map(|h| g.le2(f, h)).collect::<Result<Vec<_>>>()?.contains(&true);
                report.check(found, "f ∉ zeros ⇒ f ≤₂ g for some g ∈ ones", at);
            }
            if !phi.ones().contains(f) {
                let found = phi.zeros().iter().map(|h| g.le1(f, h)).collect::<Result<Vec<_>>>()?.contains(&true);
                report.check(found, "f ∉ ones ⇒ f ≤₁ g for some g ∈ zeros", at);
            }
        }
    }
    Ok(())
}

/// The maximal maps are exactly the evaluations; every element is a filter
/// and an ideal element; the embedding is bijective.
fn representation(spec: &str, side: &str, l: &Lattice, g: &Graph, c: &Completion, report: &mut CheckReport) -> Result<()> {
    let evals: BTreeSet<MpeMap> = l.elements().map(|a| evaluation(g, a)).collect::<Result<_>>()?;
    let all: BTreeSet<MpeMap> = c.elements().iter().cloned().collect();
    report.check(evals == all, "maximal maps are exactly the evaluations", || {
        json!({"lattice": spec, "graph": side, "evaluations": evals.len(), "maps": all.len()})
    });
    let everything: Vec<usize> = (0..c.len()).collect();
    report.check(c.filter_elements()? == everything, "every element is a filter element", || json!({"lattice": spec, "graph": side}));
    report.check(c.ideal_elements()? == everything, "every element is an ideal element", || json!({"lattice": spec, "graph": side}));
    Ok(())
}

/// On `D̄♭(L)`: maximal E-preserving maps, stable pairs `(A, r(A))`, and
/// maximal partial L-graph morphisms into `2̃` coincide.
fn stable_pairs(spec: &str, y: &Graph, cy: &Completion, report: &mut CheckReport) -> Result<()> {
    let mpes: BTreeSet<MpeMap> = cy.elements().iter().cloned().collect();
    for phi in &mpes {
        let ok = &y.ell(phi.zeros())? == phi.ones() && &y.r(phi.ones())? == phi.zeros();
        report.check(ok, "MPE ⇒ ones = ℓ(zeros), zeros = r(ones)", || json!({"lattice": spec, "phi": format!("{phi:?}")}));
    }
    let stable: BTreeSet<MpeMap> =
        y.ell_stable_sets()?.into_iter().map(|a| Ok(MpeMap::new(a.clone(), y.r(&a)?))).collect::<Result<_>>()?;
    report.check(stable == mpes, "stable pairs are exactly the MPEs", || {
        json!({"lattice": spec, "stable": stable.len(), "mpe": mpes.len()})
    });
    if y.len() <= LGRAPH_SCAN_LIMIT {
        let morphisms = maximal_partial_lgraph_morphisms(y)?;
        report.check(morphisms == mpes, "maximal partial L-graph morphisms are exactly the MPEs", || {
            json!({"lattice": spec, "morphisms": morphisms.len(), "mpe": mpes.len()})
        });
    } else {
        for phi in &mpes {
            report.check(is_partial_lgraph_morphism(y, phi)?, "MPE is a partial L-graph morphism", || {
                json!({"lattice": spec, "phi": format!("{phi:?}")})
            });
        }
    }
    Ok(())
}

/// A partial map `φ: X ⇀ 2̃` preserving `≤₁` and `≤₂` on its domain and
/// satisfying the stable-set conditions for the nontrivial stable sets of
/// `2̃` (`{1}` is `ℓ`-stable, `{0}` is `r`-stable). The trivial stable sets
/// `∅` and `2̃` would force totality and are left out.
pub fn is_partial_lgraph_morphism(x: &Graph, phi: &MpeMap) -> Result<bool> {
    let two = Graph::two_element_order();
    let dom = phi.domain();
    let val = |f: usize| usize::from(phi.value(f) == Some(true));
    for f in dom.iter() {
        for g in dom.iter() {
            if x.le1(f, g)? && !two.le1(val(f), val(g))? {
                return Ok(false);
            }
            if x.le2(f, g)? && !two.le2(val(f), val(g))? {
                return Ok(false);
            }
        }
    }
    for a in two.ell_stable_sets()?.into_iter().filter(|a| !a.is_empty() && !a.is_full()) {
        let pre = |s: &Subset| if s.contains(1) { phi.ones().clone() } else { phi.zeros().clone() };
        if pre(&two.r(&a)?) != x.r(&pre(&a))? {
            return Ok(false);
        }
    }
    for a in two.r_stable_sets()?.into_iter().filter(|a| !a.is_empty() && !a.is_full()) {
        let pre = |s: &Subset| if s.contains(1) { phi.ones().clone() } else { phi.zeros().clone() };
        if pre(&two.ell(&a)?) != x.ell(&pre(&a))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive over one-sets: the `ℓ`-stable condition forces
/// `zeros = r(ones)`, so every partial L-graph morphism has that form.
fn maximal_partial_lgraph_morphisms(x: &Graph) -> Result<BTreeSet<MpeMap>> {
    let mut found = Vec::new();
    for ones in all_subsets(x.len()) {
        let zeros = x.r(&ones)?;
        if !ones.is_disjoint(&zeros) {
            continue;
        }
        let phi = MpeMap::new(ones, zeros);
        if is_partial_lgraph_morphism(x, &phi)? {
            found.push(phi);
        }
    }
    let maximal = found
        .iter()
        .filter(|p| {
            !found.iter().any(|q| {
                q != *p && p.ones().is_subset(q.ones()) && p.zeros().is_subset(q.zeros())
            })
        })
        .cloned()
        .collect();
    Ok(maximal)
}

/// Seeded homomorphisms among small corpus lattices: each lift is a complete
/// homomorphism restricting to `u`; identities lift to identities; lifting
/// and `D̄♭` respect composition; every certified morphism is E-preserving.
pub fn functor_battery(seed: u64, hom_count: usize, max_size: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("functoriality and lifting");
    let lattices = corpus_arcs(max_size, seed);
    let mut ext: BTreeMap<String, AhExtension> = BTreeMap::new();
    for (spec, l) in &lattices {
        ext.insert(spec.clone(), AhExtension::new(l.clone())?);
    }
    let mut pool: Vec<(String, String, LatticeHom)> = Vec::new();
    for (s, l) in &lattices {
        for (t, k) in &lattices {
            for u in LatticeHom::enumerate(l, k) {
                pool.push((s.clone(), t.clone(), u));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    let chosen: Vec<&(String, String, LatticeHom)> = pool.iter().take(hom_count).collect();
    report.check(chosen.len() >= hom_count, "enough homomorphisms sampled", || json!({"available": pool.len()}));

    for (s, t, u) in &chosen {
        let lifted = lift_hom(u, &ext[s], &ext[t], seed)?;
        report.check(lifted.alpha.is_e_preserving(), "certified L-graph morphism is E-preserving", || json!({"from": s, "to": t}));
        report.absorb(lifted.report);
    }

    for (spec, l) in &lattices {
        let e = &ext[spec];
        let id = LatticeHom::identity(l.clone());
        let lifted = lift_hom(&id, e, e, seed)?;
        let identity: Vec<usize> = (0..e.completion.len()).collect();
        report.check(lifted.hom.map() == identity, "lift(id) = id", || json!({"lattice": spec}));
        let ident_graph = LGraphMorphism::identity(e.graph.clone());
        report.check(lifted.alpha.map() == ident_graph.map(), "D̄♭(id) = id", || json!({"lattice": spec}));
    }

    // composable pairs u: L → K, v: K → M
    let mut composites = 0;
    for (s, t, u) in &chosen {
        let Some((_, m, v)) = pool.iter().find(|(k, _, _)| k == t) else { continue };
        let vu = u.then(v)?;
        let (el, ek, em) = (&ext[s], &ext[t], &ext[m]);
        let d_vu = dbar_on_hom(&vu, &em.graph, &el.graph)?;
        let d_then = dbar_on_hom(v, &em.graph, &ek.graph)?.then(&dbar_on_hom(u, &ek.graph, &el.graph)?)?;
        report.check(d_vu.map() == d_then.map(), "D̄♭(v∘u) = D̄♭(u)∘D̄♭(v)", || json!({"L": s, "K": t, "M": m}));
        let lift_vu = lift_hom(&vu, el, em, seed)?.hom;
        let lift_then = lift_hom(u, el, ek, seed)?.hom.then(&lift_hom(v, ek, em, seed)?.hom)?;
        report.check(lift_vu.map() == lift_then.map(), "lift(v∘u) = lift(v)∘lift(u)", || json!({"L": s, "K": t, "M": m}));
        report.check(is_e_preserving(&em.graph, &el.graph, d_vu.map()), "composite morphism is E-preserving", || {
            json!({"L": s, "M": m})
        });
        composites += 1;
    }
    report.check(composites > 0, "composable pairs exercised", || json!(null));
    Ok(report)
}
