//! The graph of maximal partial homomorphisms `D♭(L)` and the completion
//! of `L` as the maximal E-preserving maps over it.
//!
//! On a finite set the dual topology is discrete, so it is not stored; the
//! closed-set subbasis `V_a`, `W_a` is kept as data on the graph.

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lattice::{Lattice, LatticeHom};
use crate::mpe::{enumerate_mpe, Completion, MpeMap, PairHost};
use crate::oracle::all_partial_homs;
use crate::partial_hom::{PartialHom, PartialHomRecord};
use crate::report::CheckReport;

/// `(↑a, ↓b)` with `a ≰ b` is maximal iff no `a′ < a` has `a′ ≰ b` and no
/// `b′ > b` has `a ≰ b′`.
pub fn is_maximal_pair(l: &Lattice, a: usize, b: usize) -> bool {
    !l.leq(a, b)
        && l.elements().all(|x| !(x != a && l.leq(x, a)) || l.leq(x, b))
        && l.elements().all(|y| !(y != b && l.leq(b, y)) || l.leq(a, y))
}

/// All maximal partial homomorphisms `L ⇀ 2`, in canonical order.
pub fn enumerate_mph(l: &Lattice) -> Vec<PartialHom> {
    let mut out: Vec<PartialHom> = l
        .elements()
        .flat_map(|a| l.elements().map(move |b| (a, b)))
        .filter(|&(a, b)| is_maximal_pair(l, a, b))
        .map(|(a, b)| PartialHom::principal(l, a, b))
        .collect();
    out.sort();
    out
}

/// `D♭(L)`: the labeled graph over `enumerate_mph(L)`.
pub fn build_d(l: &Lattice) -> Graph {
    Graph::from_partial_homs(l, enumerate_mph(l))
}

/// The evaluation map at `a` over a lattice-derived graph: ones `W_a`,
/// zeros `V_a`. Checked to be a maximal E-preserving map.
pub fn evaluation(graph: &Graph, a: usize) -> Result<MpeMap> {
    let sb = graph.subbasis().ok_or(Error::NoSubbasis)?;
    if a >= sb.w.len() {
        return Err(Error::IndexOutOfRange { index: a, len: sb.w.len() });
    }
    let phi = MpeMap::new(sb.w[a].clone(), sb.v[a].clone());
    if !graph.is_fixpoint(&phi) {
        return Err(Error::NotAnMpe(format!("evaluation at element {a}")));
    }
    Ok(phi)
}

/// The completion `C(D♭(L))` with `L` embedded by evaluation.
pub fn canonical_extension_ploscica(l: &Arc<Lattice>) -> Result<Completion> {
    let graph = Arc::new(build_d(l));
    let mut c = enumerate_mpe(graph.clone())?;
    c.set_name(format!("ploscica({})", l.name()));
    c.embed_with(l.clone(), |a| evaluation(&graph, a))?;
    Ok(c)
}

/// Outcome of composing a maximal partial homomorphism with a lattice
/// homomorphism and testing the composite for maximality.
#[derive(Clone, Debug, Serialize)]
pub struct CompositionReport {
    pub composite: PartialHomRecord,
    pub domain: Vec<String>,
    pub is_partial_hom: bool,
    /// Partial homomorphisms properly extending the composite.
    pub proper_extensions: Vec<PartialHomRecord>,
    pub is_maximal: bool,
}

/// Computes `f∘u` for `u: L → K` and an MPH `f` of `K` and lists every
/// proper extension of it among the partial homomorphisms of `L`.
pub fn compose_mph(u: &LatticeHom, f: &PartialHom) -> Result<CompositionReport> {
    let l = u.src();
    let fu = f.compose(u);
    let extensions: Vec<PartialHom> =
        all_partial_homs(l)?.into_iter().filter(|g| g != &fu && g.extends(&fu)).collect();
    Ok(CompositionReport {
        composite: fu.to_record(l),
        domain: fu.domain().iter().map(|x| l.element_name(x).to_string()).collect(),
        is_partial_hom: fu.is_partial_hom(l),
        is_maximal: extensions.is_empty(),
        proper_extensions: extensions.iter().map(|g| g.to_record(l)).collect(),
    })
}

/// The 3-chain `0 < a < 1`, `M3` with atoms `b, c, d`, `u: a ↦ b` and
/// `f = (↑c, ↓d)`: the composite `f∘u` is a partial homomorphism on `{0, 1}`
/// with the two total extensions `a ↦ 0` and `a ↦ 1`, so it is not maximal.
/// Composition with a surjective homomorphism does keep maximality.
pub fn reproduce_composition_failure() -> Result<(CompositionReport, CheckReport)> {
    let chain = Arc::new(crate::lattice::corpus("chain(3)")?);
    let m3 = Arc::new(crate::lattice::corpus("M3")?);
    let u = LatticeHom::from_names(chain.clone(), m3.clone(), &[("0", "0"), ("a", "b"), ("1", "1")])?;
    let f = PartialHom::principal(&m3, m3.index_of("c")?, m3.index_of("d")?);
    let composed = compose_mph(&u, &f)?;

    let mut report = CheckReport::new("composition of an MPH with u");
    report.check(enumerate_mph(&m3).contains(&f), "f = (↑c,↓d) is an MPH of M3", || json!(null));
    report.check(composed.is_partial_hom, "f∘u is a partial homomorphism", || json!(composed.composite));
    report.check(composed.domain == ["0", "1"], "dom(f∘u) = {0,1}", || json!(composed.domain));
    let a = chain.index_of("a")?;
    for value in [false, true] {
        let total = composed.proper_extensions.iter().any(|g| {
            let hits = |names: &[String]| names.iter().any(|n| n == "a");
            g.ones.len() + g.zeros.len() == chain.len() && (if value { hits(&g.ones) } else { hits(&g.zeros) })
        });
        report.check(total, "total extension of f∘u", || json!({"element": a, "value": value}));
    }
    report.check(!composed.is_maximal, "f∘u is not maximal", || json!(composed.proper_extensions));

    let id = LatticeHom::identity(m3.clone());
    for g in enumerate_mph(&m3) {
        let r = compose_mph(&id, &g)?;
        report.check(r.is_maximal, "g∘id is maximal for surjective id", || json!(r.composite));
    }
    Ok((composed, report))
}
