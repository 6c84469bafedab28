//! Finite bounded lattices stored as an order relation with derived
//! meet and join tables.

mod corpus;
mod hom;
pub mod io;

pub use corpus::{corpus, standard_corpus, CorpusEntry};
pub use hom::LatticeHom;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// How the order of a lattice is supplied to [`Lattice::build`].
#[derive(Clone, Debug)]
pub enum OrderInput {
    /// Pairs `(a, b)` with `a` below `b`; closed reflexively and transitively.
    Covers(Vec<(usize, usize)>),
    /// A full `n × n` relation, `leq[a][b]` meaning `a ≤ b`.
    Leq(Vec<Vec<bool>>),
}

/// A validated finite bounded lattice. Elements are dense indices `0..n`
/// in input order, with a name table.
#[derive(Clone)]
pub struct Lattice {
    name: String,
    names: Vec<String>,
    up: Vec<Subset>,
    down: Vec<Subset>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    bot: usize,
    top: usize,
}

impl Lattice {
    pub fn build(name: impl Into<String>, names: Vec<String>, order: OrderInput) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        let mut seen = HashMap::new();
        for (i, x) in names.iter().enumerate() {
            if seen.insert(x.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(x.clone()));
            }
        }

        let leq = match order {
            OrderInput::Covers(covers) => {
                let mut rel = vec![vec![false; n]; n];
                for (i, row) in rel.iter_mut().enumerate() {
                    row[i] = true;
                }
                for &(a, b) in &covers {
                    if a >= n || b >= n {
                        return Err(Error::IndexOutOfRange { index: a.max(b), len: n });
                    }
                    rel[a][b] = true;
                }
                // Warshall
                for k in 0..n {
                    for i in 0..n {
                        if rel[i][k] {
                            for j in 0..n {
                                if rel[k][j] {
                                    rel[i][j] = true;
                                }
                            }
                        }
                    }
                }
                rel
            }
            OrderInput::Leq(rel) => {
                if rel.len() != n || rel.iter().any(|row| row.len() != n) {
                    return Err(Error::MalformedRelation(format!("expected a {n}×{n} matrix")));
                }
                for i in 0..n {
                    if !rel[i][i] {
                        return Err(Error::NotAPoset(format!("{} ≤ {} fails (not reflexive)", names[i], names[i])));
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            if rel[i][j] && rel[j][k] && !rel[i][k] {
                                return Err(Error::NotAPoset(format!(
                                    "{} ≤ {} ≤ {} but not {} ≤ {} (not transitive)",
                                    names[i], names[j], names[k], names[i], names[k]
                                )));
                            }
                        }
                    }
                }
                rel
            }
        };

        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::NotAPoset(format!(
                        "{} ≤ {} and {} ≤ {} (not antisymmetric)",
                        names[i], names[j], names[j], names[i]
                    )));
                }
            }
        }

        let up: Vec<Subset> = (0..n).map(|a| Subset::filter(n, |x| leq[a][x])).collect();
        let down: Vec<Subset> = (0..n).map(|a| Subset::filter(n, |x| leq[x][a])).collect();

        let bot = (0..n).find(|&a| up[a].is_full()).ok_or(Error::NotBounded("bottom"))?;
        let top = (0..n).find(|&a| down[a].is_full()).ok_or(Error::NotBounded("top"))?;

        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let lower = down[a].intersection(&down[b]);
                let m = lower.iter().find(|&m| lower.is_subset(&down[m])).ok_or_else(|| Error::NotALattice {
                    a: names[a].clone(),
                    b: names[b].clone(),
                    bound: "meet",
                })?;
                let upper = up[a].intersection(&up[b]);
                let j = upper.iter().find(|&j| upper.is_subset(&up[j])).ok_or_else(|| Error::NotALattice {
                    a: names[a].clone(),
                    b: names[b].clone(),
                    bound: "join",
                })?;
                meet[a][b] = m;
                meet[b][a] = m;
                join[a][b] = j;
                join[b][a] = j;
            }
        }

        Ok(Lattice { name: name.into(), names, up, down, meet, join, bot, top })
    }

    /// Builds from element names and a cover list given by name.
    pub fn from_covers(name: &str, elements: &[&str], covers: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        let index = |x: &str| names.iter().position(|y| y == x).ok_or_else(|| Error::UnknownElement(x.to_string()));
        let pairs = covers.iter().map(|&(a, b)| Ok((index(a)?, index(b)?))).collect::<Result<Vec<_>>>()?;
        Lattice::build(name, names.clone(), OrderInput::Covers(pairs))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Replaces the element name table; names must stay distinct.
    pub(crate) fn set_element_names(&mut self, names: Vec<String>) {
        assert_eq!(names.len(), self.names.len());
        self.names = names;
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element_name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Meet of a finite family; the empty meet is the top.
    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a finite family; the empty join is the bottom.
    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bot, |acc, x| self.join(acc, x))
    }

    fn check_index(&self, a: usize) -> Result<()> {
        if a < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: a, len: self.len() })
        }
    }

    /// `↑a = {x : a ≤ x}`.
    pub fn principal_filter(&self, a: usize) -> Result<Subset> {
        self.check_index(a)?;
        Ok(self.up[a].clone())
    }

    /// `↓a = {x : x ≤ a}`.
    pub fn principal_ideal(&self, a: usize) -> Result<Subset> {
        self.check_index(a)?;
        Ok(self.down[a].clone())
    }

    pub(crate) fn up(&self, a: usize) -> &Subset {
        &self.up[a]
    }

    pub(crate) fn down(&self, a: usize) -> &Subset {
        &self.down[a]
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))))
        })
    }

    /// Cover pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) {
                    let between = (0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                    if !between {
                        out.push((a, b));
                    }
                }
            }
        }
        out
    }

    /// Length of the longest chain from the bottom to `a`; used for DOT ranks.
    pub fn height(&self, a: usize) -> usize {
        let covers = self.covers();
        let mut h = vec![0usize; self.len()];
        // elements sorted by size of their principal ideal form a linear extension
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by_key(|&x| self.down[x].len());
        for &x in &order {
            for &(lo, hi) in &covers {
                if hi == x {
                    h[x] = h[x].max(h[lo] + 1);
                }
            }
        }
        h[a]
    }

    /// Order-preserving relabelling check: same size and same relation under
    /// the identity on indices.
    pub fn same_order(&self, other: &Lattice) -> bool {
        self.len() == other.len() && self.up == other.up
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("name", &self.name)
            .field("elements", &self.names)
            .field("covers", &self.covers())
            .finish()
    }
}
