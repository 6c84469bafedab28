//! Canonical extensions of finite bounded lattices.
//!
//! Three independent constructions are provided: maximal E-preserving maps
//! over the graph of maximal partial homomorphisms ([`ploscica`]), the same
//! over the graph of all special partial homomorphisms together with the
//! functorial lifting of homomorphisms ([`ah`]), and the Galois-stable sets
//! of the filter/ideal polarity ([`oracle`]). [`battery`] cross-checks them.

pub mod ah;
pub mod battery;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod mpe;
pub mod oracle;
pub mod partial_hom;
pub mod ploscica;
pub mod report;
pub mod subset;

pub use error::{Error, Result};
pub use graph::Graph;
pub use lattice::{Lattice, LatticeHom};
pub use mpe::{Completion, MpeMap};
pub use partial_hom::PartialHom;
pub use report::CheckReport;
pub use subset::Subset;
