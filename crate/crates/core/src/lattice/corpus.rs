//! Deterministic lattice generators used by the test batteries and the CLI.
//!
//! A corpus entry is named by a small expression language:
//! `chain(n)`, `boolean(k)`, `M3`, `N5`, `product(<expr>,<expr>)` and
//! `random(max_size,seed)`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Lattice, OrderInput};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub spec: String,
    pub lattice: Lattice,
}

/// Builds the lattice named by `spec`.
pub fn corpus(spec: &str) -> Result<Lattice> {
    let spec = spec.trim();
    let (head, args) = match spec.find('(') {
        Some(open) if spec.ends_with(')') => (&spec[..open], split_args(&spec[open + 1..spec.len() - 1])),
        Some(_) => return Err(Error::UnknownCorpusName(spec.to_string())),
        None => (spec, Vec::new()),
    };
    let int_arg = |i: usize| -> Result<u64> {
        args.get(i)
            .and_then(|a| a.trim().parse().ok())
            .ok_or_else(|| Error::UnknownCorpusName(spec.to_string()))
    };
    let mut lattice = match (head, args.len()) {
        ("chain", 1) => chain(int_arg(0)? as usize)?,
        ("boolean", 1) => boolean(int_arg(0)? as usize)?,
        ("M3", 0) => m3(),
        ("N5", 0) => n5(),
        ("product", 2) => product(&corpus(&args[0])?, &corpus(&args[1])?)?,
        ("random", 2) => random(int_arg(0)? as usize, int_arg(1)?)?,
        _ => return Err(Error::UnknownCorpusName(spec.to_string())),
    };
    lattice.set_name(spec);
    Ok(lattice)
}

fn split_args(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth -= 1;
                cur.push(c);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur).trim().to_string()),
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Chains of length 1–8, Boolean lattices of rank ≤ 3, `M3`, `N5` and 20
/// random lattices seeded from `seed`, restricted to at most `max_size`
/// elements.
pub fn standard_corpus(max_size: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut specs: Vec<String> = (1..=8).map(|n| format!("chain({n})")).collect();
    specs.extend((0..=3).map(|k| format!("boolean({k})")));
    specs.push("M3".into());
    specs.push("N5".into());
    specs.extend((0..20).map(|i| format!("random(8,{})", seed + i)));
    specs
        .into_iter()
        .map(|spec| {
            let lattice = corpus(&spec).expect("built-in corpus entry");
            CorpusEntry { spec, lattice }
        })
        .filter(|e| e.lattice.len() <= max_size)
        .collect()
}

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

fn chain(n: usize) -> Result<Lattice> {
    if n == 0 {
        return Err(Error::EmptyLattice);
    }
    let names: Vec<String> = (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == n - 1 => "1".to_string(),
            i => (LETTERS[(i - 1) % 26] as char).to_string(),
        })
        .collect();
    let covers = (1..n).map(|i| (i - 1, i)).collect();
    Lattice::build("chain", names, OrderInput::Covers(covers))
}

fn boolean(k: usize) -> Result<Lattice> {
    if k > 6 {
        return Err(Error::TooLarge { size: k, limit: 6 });
    }
    let atoms = b"xyzuvw";
    let n = 1usize << k;
    let names: Vec<String> = (0..n)
        .map(|mask| {
            if mask == 0 {
                "0".to_string()
            } else if mask == n - 1 {
                "1".to_string()
            } else {
                (0..k).filter(|i| mask & (1 << i) != 0).map(|i| atoms[i] as char).collect()
            }
        })
        .collect();
    let leq = (0..n).map(|a| (0..n).map(|b| a & b == a).collect()).collect();
    Lattice::build("boolean", names, OrderInput::Leq(leq))
}

fn m3() -> Lattice {
    Lattice::from_covers(
        "M3",
        &["0", "b", "c", "d", "1"],
        &[("0", "b"), ("0", "c"), ("0", "d"), ("b", "1"), ("c", "1"), ("d", "1")],
    )
    .expect("M3")
}

fn n5() -> Lattice {
    Lattice::from_covers("N5", &["0", "a", "b", "c", "1"], &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])
        .expect("N5")
}

fn product(l: &Lattice, k: &Lattice) -> Result<Lattice> {
    let n = l.len() * k.len();
    let pair = |i: usize| (i / k.len(), i % k.len());
    let names = (0..n)
        .map(|i| {
            let (a, b) = pair(i);
            format!("({},{})", l.element_name(a), k.element_name(b))
        })
        .collect();
    let leq = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let ((a, b), (c, d)) = (pair(i), pair(j));
                    l.leq(a, c) && k.leq(b, d)
                })
                .collect()
        })
        .collect();
    Lattice::build("product", names, OrderInput::Leq(leq))
}

/// A random lattice of at most `max_size` elements: the closed sets of a
/// random intersection-closed family over a 3- or 4-element ground set.
fn random(max_size: usize, seed: u64) -> Result<Lattice> {
    if max_size < 2 {
        return Err(Error::TooLarge { size: 2, limit: max_size });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let ground = rng.gen_range(3..=4u32);
        let full = (1u32 << ground) - 1;
        let picks = rng.gen_range(1..=5);
        let mut family: BTreeSet<u32> = BTreeSet::from([full]);
        for _ in 0..picks {
            family.insert(rng.gen_range(0..full));
        }
        loop {
            let snapshot: Vec<u32> = family.iter().copied().collect();
            let before = family.len();
            for &a in &snapshot {
                for &b in &snapshot {
                    family.insert(a & b);
                }
            }
            if family.len() == before {
                break;
            }
        }
        if family.len() < 3 || family.len() > max_size {
            continue;
        }
        let mut sets: Vec<u32> = family.into_iter().collect();
        sets.sort_by_key(|s| (s.count_ones(), *s));
        let n = sets.len();
        let names = (0..n)
            .map(|i| match i {
                0 => "0".to_string(),
                i if i == n - 1 => "1".to_string(),
                i => format!("p{i}"),
            })
            .collect();
        let leq = sets.iter().map(|&a| sets.iter().map(|&b| a & b == a).collect()).collect();
        return Lattice::build("random", names, OrderInput::Leq(leq));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain3_names_match_figure() {
        let l = corpus("chain(3)").unwrap();
        assert_eq!(l.names(), &["0", "a", "1"]);
        assert_eq!(l.name(), "chain(3)");
    }

    #[test]
    fn boolean3_is_a_cube() {
        let l = corpus("boolean(3)").unwrap();
        assert_eq!(l.len(), 8);
        assert_eq!(l.covers().len(), 12);
    }

    #[test]
    fn m3_is_figure_k() {
        let l = corpus("M3").unwrap();
        assert_eq!(l.names(), &["0", "b", "c", "d", "1"]);
        assert!(!l.is_distributive());
    }

    #[test]
    fn product_of_chains() {
        let l = corpus("product(chain(2),chain(3))").unwrap();
        assert_eq!(l.len(), 6);
        assert!(l.is_distributive());
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        for seed in 0..30 {
            let a = corpus(&format!("random(8,{seed})")).unwrap();
            let b = corpus(&format!("random(8,{seed})")).unwrap();
            assert!(a.len() <= 8 && a.len() >= 3);
            assert!(a.same_order(&b));
        }
    }

    #[test]
    fn random_family_includes_nondistributive_members() {
        let nd = (0..20).filter(|s| !corpus(&format!("random(8,{s})")).unwrap().is_distributive()).count();
        assert!(nd > 0);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(corpus("M4"), Err(Error::UnknownCorpusName(_))));
        assert!(matches!(corpus("chain(x)"), Err(Error::UnknownCorpusName(_))));
    }

    #[test]
    fn standard_corpus_respects_size_limit() {
        let all = standard_corpus(8, 0);
        assert_eq!(all.len(), 8 + 4 + 2 + 20);
        assert!(standard_corpus(5, 0).iter().all(|e| e.lattice.len() <= 5));
    }
}
