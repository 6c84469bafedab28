//! JSON lattice/hom files and DOT export of Hasse diagrams.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Lattice, LatticeHom, OrderInput};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeFile {
    pub name: String,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<Vec<bool>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomFile {
    pub from: String,
    pub to: String,
    pub map: BTreeMap<String, String>,
}

impl LatticeFile {
    pub fn into_lattice(self) -> Result<Lattice> {
        let order = match (self.covers, self.leq) {
            (Some(covers), None) => {
                let index = |x: &str| {
                    self.elements
                        .iter()
                        .position(|y| y == x)
                        .ok_or_else(|| Error::UnknownElement(x.to_string()))
                };
                OrderInput::Covers(
                    covers
                        .iter()
                        .map(|[a, b]| Ok((index(a)?, index(b)?)))
                        .collect::<Result<_>>()?,
                )
            }
            (None, Some(leq)) => OrderInput::Leq(leq),
            _ => return Err(Error::Format("lattice file needs exactly one of `covers` or `leq`".into())),
        };
        Lattice::build(self.name, self.elements, order)
    }

    pub fn from_lattice(l: &Lattice) -> Self {
        LatticeFile {
            name: l.name().to_string(),
            elements: l.names().to_vec(),
            covers: Some(
                l.covers()
                    .into_iter()
                    .map(|(a, b)| [l.element_name(a).to_string(), l.element_name(b).to_string()])
                    .collect(),
            ),
            leq: None,
        }
    }
}

pub fn lattice_from_json(text: &str) -> Result<Lattice> {
    serde_json::from_str::<LatticeFile>(text)?.into_lattice()
}

pub fn lattice_to_json(l: &Lattice) -> String {
    serde_json::to_string_pretty(&LatticeFile::from_lattice(l)).expect("serializable")
}

pub fn load_lattice(path: &Path) -> Result<Lattice> {
    lattice_from_json(&std::fs::read_to_string(path)?)
}

/// Loads a hom file; `from`/`to` are resolved relative to the hom file.
pub fn load_hom(path: &Path) -> Result<LatticeHom> {
    let file: HomFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let resolve = |p: &str| -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };
    let src = Arc::new(load_lattice(&resolve(&file.from))?);
    let dst = Arc::new(load_lattice(&resolve(&file.to))?);
    let pairs: Vec<(&str, &str)> = file.map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    LatticeHom::from_names(src, dst, &pairs)
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram, bottom-to-top, one rank per height.
pub fn lattice_to_dot(l: &Lattice) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", dot_escape(l.name())).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in l.elements() {
        ranks.entry(l.height(a)).or_default().push(a);
        writeln!(out, "  n{a} [label=\"{}\"];", dot_escape(l.element_name(a))).unwrap();
    }
    for members in ranks.values() {
        let ids: Vec<String> = members.iter().map(|a| format!("n{a}")).collect();
        writeln!(out, "  {{ rank=same; {}; }}", ids.join("; ")).unwrap();
    }
    for (a, b) in l.covers() {
        writeln!(out, "  n{a} -> n{b} [arrowhead=none];").unwrap();
    }
    out.push_str("}\n");
    out
}
