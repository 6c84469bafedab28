//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use canext::battery::{
    composition_battery, density_battery, distributive_battery, functor_battery, lemma_battery, oracle_battery,
    psi_battery, self_extension_battery,
};
use canext::{CheckReport, Result};

const SEED: u64 = 0;
/// Corpus bound for the self-extension, density, Ψ and distributive checks.
const CORPUS_MAX: usize = 8;
/// Corpus bound for the lemma battery.
const LEMMA_MAX: usize = 6;
/// Corpus bound for the lattices the sampled homomorphisms run between.
const FUNCTOR_MAX: usize = 5;
const RANDOM_GRAPHS: usize = 200;
const RANDOM_GRAPH_MAX_VERTICES: usize = 7;
const HOM_SAMPLES: usize = 25;

const SELF_EXTENSION_BUDGET: Duration = Duration::from_secs(60);
const ORACLE_BUDGET: Duration = Duration::from_secs(120);
const FUNCTOR_BUDGET: Duration = Duration::from_secs(120);

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Result<CheckReport>,
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "finite self-extension",
            budget: Some(SELF_EXTENSION_BUDGET),
            run: || self_extension_battery(CORPUS_MAX, SEED),
        },
        Criterion {
            id: 2,
            title: "oracle equivalence",
            budget: Some(ORACLE_BUDGET),
            run: || oracle_battery(SEED, RANDOM_GRAPHS, RANDOM_GRAPH_MAX_VERTICES),
        },
        Criterion { id: 3, title: "lemma battery", budget: None, run: || lemma_battery(LEMMA_MAX, SEED) },
        Criterion { id: 4, title: "density and compactness", budget: None, run: || density_battery(CORPUS_MAX, SEED) },
        Criterion { id: 5, title: "Ψ isomorphism", budget: None, run: || psi_battery(CORPUS_MAX, SEED) },
        Criterion { id: 6, title: "composition counterexample", budget: None, run: composition_battery },
        Criterion {
            id: 7,
            title: "functoriality and lifting",
            budget: Some(FUNCTOR_BUDGET),
            run: || functor_battery(SEED, HOM_SAMPLES, FUNCTOR_MAX),
        },
        Criterion {
            id: 8,
            title: "distributive specialization",
            budget: None,
            run: || distributive_battery(CORPUS_MAX, SEED),
        },
    ]
}

fn main() -> ExitCode {
    let mut all_ok = true;
    for c in criteria() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = c.budget.is_none_or(|b| elapsed <= b);
        let (ok, detail) = match &outcome {
            Ok(r) => (r.passed() && in_time, format!("{} cases, {} failures", r.cases, r.failure_count)),
            Err(e) => (false, format!("error: {e}")),
        };
        let budget = c.budget.map(|b| format!(" / {}s", b.as_secs())).unwrap_or_default();
        println!(
            "{} criterion {}: {} ({detail}; {:.2}s{budget})",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
        if let Ok(r) = &outcome {
            if let Some(f) = r.first_failure() {
                println!("    first failure: {} {}", f.condition, f.witness);
            }
        }
        all_ok &= ok;
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
