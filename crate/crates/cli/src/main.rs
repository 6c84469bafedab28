//! `canext`: validate lattice files, build canonical extensions, lift
//! homomorphisms and run the property batteries.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation failure,
//! 3 property-check counterexample.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use canext::ah::{lift_hom_fresh, AhExtension};
use canext::battery;
use canext::lattice::io::{lattice_from_json, load_hom, HomFile};
use canext::lattice::corpus;
use canext::oracle::{gh_extension, iso_fixing_l};
use canext::ploscica::{canonical_extension_ploscica, compose_mph, enumerate_mph};
use canext::{CheckReport, Completion, Lattice, LatticeHom};

const CORPUS_ENV: &str = "CANEXT_CORPUS_DIR";

#[derive(Parser, Debug)]
#[command(name = "canext", version, about = "Canonical extensions of finite bounded lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a lattice or homomorphism file.
    Validate { path: String },
    /// Build the canonical extension of a lattice (file or corpus name).
    Extend {
        lattice: String,
        #[arg(long, value_enum, default_value_t = Method::Ploscica)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Lift a homomorphism file to the canonical extensions.
    Lift {
        hom: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the property batteries over the built-in corpus.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest corpus lattice (or random graph, for the oracle suite).
        #[arg(long)]
        max_size: Option<usize>,
        /// Directory for the JSON sidecar.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Ploscica,
    Ah,
    Polarity,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Ploscica => "ploscica",
            Method::Ah => "ah",
            Method::Polarity => "polarity",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Lemmas,
    Oracle,
    Functor,
    All,
}

enum Failure {
    Validation(anyhow::Error),
    Counterexample,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Validation(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Extend { lattice, method, seed, out } => cmd_extend(&lattice, method, seed, &out),
        Command::Lift { hom, seed, out } => cmd_lift(&hom, seed, &out),
        Command::Check { suite, seed, max_size, out } => cmd_check(suite, seed, max_size, out.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Counterexample) => ExitCode::from(3),
    }
}

/// An existing path, or the same relative path under `CANEXT_CORPUS_DIR`.
fn resolve(arg: &str) -> Option<PathBuf> {
    let p = PathBuf::from(arg);
    if p.is_file() {
        return Some(p);
    }
    let dir = std::env::var_os(CORPUS_ENV)?;
    let base = Path::new(&dir);
    [base.join(arg), base.join(format!("{arg}.json"))].into_iter().find(|p| p.is_file())
}

/// A lattice file, or failing that a built-in corpus name such as `M3`.
fn load_lattice_arg(arg: &str) -> anyhow::Result<Lattice> {
    match resolve(arg) {
        Some(path) => {
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            lattice_from_json(&text).with_context(|| format!("{}", path.display()))
        }
        None => corpus(arg).map_err(|e| anyhow!("{arg}: no such file, and not a corpus name ({e})")),
    }
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn print_report(r: &CheckReport) {
    println!("{r}");
    if let Some(f) = r.first_failure() {
        println!("  first failure: {} {}", f.condition, f.witness);
    }
}

fn cmd_validate(arg: &str) -> Outcome {
    let path = resolve(arg).ok_or_else(|| anyhow!("{arg}: no such file"))?;
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("{}", path.display()))?;
    if value.get("from").is_some() {
        serde_json::from_value::<HomFile>(value)?;
        let u = load_hom(&path)?;
        println!(
            "valid homomorphism {} → {} ({} elements mapped)",
            u.src().name(),
            u.dst().name(),
            u.map().len()
        );
    } else {
        let l = lattice_from_json(&text)?;
        println!(
            "valid lattice {} ({} elements, {} covers, distributive: {})",
            l.name(),
            l.len(),
            l.covers().len(),
            l.is_distributive()
        );
    }
    Ok(())
}

fn build(method: Method, l: &Arc<Lattice>) -> canext::Result<Completion> {
    match method {
        Method::Ploscica => canonical_extension_ploscica(l),
        Method::Ah => AhExtension::new(l.clone()).map(|e| Arc::unwrap_or_clone(e.completion)),
        Method::Polarity => gh_extension(l),
    }
}

fn cmd_extend(arg: &str, method: Method, seed: u64, out: &Path) -> Outcome {
    let l = Arc::new(load_lattice_arg(arg)?);
    let c = build(method, &l)?;
    println!("lattice {} ({} elements)", l.name(), l.len());
    println!("completion {} ({} elements, method {})", c.name(), c.len(), method.as_str());
    let checks = [c.check_density()?, c.check_compactness(seed)?];
    for r in &checks {
        print_report(r);
    }
    let iso = if method == Method::Ploscica {
        None
    } else {
        let reference = canonical_extension_ploscica(&l)?;
        let iso = iso_fixing_l(&c, &reference)?;
        match &iso {
            Some(map) => println!("isomorphism over L to {}: {map:?}", reference.name()),
            None => println!("no isomorphism over L to {}", reference.name()),
        }
        Some(iso)
    };

    let stem = format!("{}.{}", file_stem(l.name()), method.as_str());
    write_file(&out.join(format!("{stem}.json")), &c.to_json())?;
    write_file(&out.join(format!("{stem}.dot")), &c.to_dot())?;
    let sidecar = json!({
        "lattice": l.name(),
        "method": method.as_str(),
        "seed": seed,
        "size": c.len(),
        "checks": checks,
        "iso_to_ploscica": iso,
    });
    write_file(&out.join(format!("{stem}.report.json")), &pretty(&sidecar))?;

    let iso_ok = !matches!(iso, Some(None));
    if checks.iter().all(CheckReport::passed) && iso_ok && c.len() == l.len() {
        Ok(())
    } else {
        Err(Failure::Counterexample)
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Composites `f∘u` with the maximal partial homomorphisms of the target
/// that fail to be maximal.
fn composition_notes(u: &LatticeHom) -> Value {
    let mut failures = Vec::new();
    for f in enumerate_mph(u.dst()) {
        match compose_mph(u, &f) {
            Ok(r) if !r.is_maximal => failures.push(json!({"mph": f.label(u.dst()), "composite": r})),
            Ok(_) => {}
            Err(e) => return json!({"skipped": e.to_string()}),
        }
    }
    json!({"non_maximal": failures})
}

fn cmd_lift(arg: &str, seed: u64, out: &Path) -> Outcome {
    let path = resolve(arg).ok_or_else(|| anyhow!("{arg}: no such file"))?;
    let u = load_hom(&path)?;
    let lifted = lift_hom_fresh(&u, seed)?;
    println!("homomorphism {} → {}", u.src().name(), u.dst().name());
    println!(
        "lift {} → {} ({} → {} elements)",
        lifted.hom.src().name(),
        lifted.hom.dst().name(),
        lifted.hom.src().len(),
        lifted.hom.dst().len()
    );
    print_report(&lifted.report);

    let notes = composition_notes(&u);
    let mut text = String::new();
    if let Some(skipped) = notes.get("skipped") {
        writeln!(text, "MPH composition scan skipped: {}", skipped.as_str().unwrap_or_default()).unwrap();
    } else {
        let bad = notes["non_maximal"].as_array().map_or(0, Vec::len);
        writeln!(text, "MPH-side composition: {bad} of {} composites f∘u are not maximal", enumerate_mph(u.dst()).len())
            .unwrap();
        if let Some(first) = notes["non_maximal"].get(0) {
            writeln!(
                text,
                "  e.g. {} ∘ u = {} on {}, extended by {}",
                first["mph"].as_str().unwrap_or_default(),
                first["composite"]["composite"]["label"].as_str().unwrap_or_default(),
                first["composite"]["domain"],
                first["composite"]["proper_extensions"].as_array().map_or(0, Vec::len),
            )
            .unwrap();
        }
    }
    print!("{text}");

    let stem = format!("{}-{}", file_stem(u.src().name()), file_stem(u.dst().name()));
    let record = json!({
        "hom": lifted.hom.to_record(),
        "source": lifted.hom.src().to_record(),
        "target": lifted.hom.dst().to_record(),
        "graph_map": lifted.alpha.map(),
    });
    write_file(&out.join(format!("{stem}.lift.json")), &pretty(&record))?;
    let sidecar = json!({
        "seed": seed,
        "report": lifted.report,
        "mph_composition": notes,
    });
    write_file(&out.join(format!("{stem}.lift.report.json")), &pretty(&sidecar))?;
    if lifted.report.passed() {
        Ok(())
    } else {
        Err(Failure::Counterexample)
    }
}

fn cmd_check(suite: Suite, seed: u64, max_size: Option<usize>, out: Option<&Path>) -> Outcome {
    let lemmas = matches!(suite, Suite::Lemmas | Suite::All);
    let oracle = matches!(suite, Suite::Oracle | Suite::All);
    let functor = matches!(suite, Suite::Functor | Suite::All);
    let mut reports = Vec::new();
    if lemmas {
        let lemma_max = max_size.unwrap_or(6);
        let corpus_max = max_size.unwrap_or(8);
        reports.push(battery::lemma_battery(lemma_max, seed)?);
        reports.push(battery::self_extension_battery(corpus_max, seed)?);
        reports.push(battery::density_battery(corpus_max, seed)?);
        reports.push(battery::psi_battery(corpus_max, seed)?);
        reports.push(battery::composition_battery()?);
        reports.push(battery::distributive_battery(corpus_max, seed)?);
    }
    if oracle {
        reports.push(battery::oracle_battery(seed, 200, max_size.unwrap_or(7))?);
    }
    if functor {
        reports.push(battery::functor_battery(seed, 25, max_size.unwrap_or(5))?);
    }
    for r in &reports {
        print_report(r);
    }
    let passed = reports.iter().all(CheckReport::passed);
    println!("{}", if passed { "all checks passed" } else { "counterexample found" });
    if let Some(dir) = out {
        let sidecar = json!({"seed": seed, "max_size": max_size, "passed": passed, "reports": reports});
        write_file(&dir.join("check.report.json"), &pretty(&sidecar))?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Counterexample)
    }
}
