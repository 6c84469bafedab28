use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("NotAPoset: {0}")]
    NotAPoset(String),
    #[error("NotALattice: elements {a} and {b} have no {bound}")]
    NotALattice { a: String, b: String, bound: &'static str },
    #[error("NotBounded: no {0} element")]
    NotBounded(&'static str),
    #[error("lattice has no elements")]
    EmptyLattice,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("malformed order relation: {0}")]
    MalformedRelation(String),
    #[error("IndexOutOfRange: index {index} for size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("NotAHomomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("UnknownCorpusName: `{0}`")]
    UnknownCorpusName(String),
    #[error("NoQuasiOrders: graph carries no ≤₁/≤₂ relations")]
    NoQuasiOrders,
    #[error("WitnessInconsistency: E and quasi-order witnesses disagree on ({f}, {g})")]
    WitnessInconsistency { f: usize, g: usize },
    #[error("NonReflexiveGraph: vertex {0} has no loop")]
    NonReflexiveGraph(usize),
    #[error("ElementNotInCompletion")]
    ElementNotInCompletion,
    #[error("InconsistentSeed: edge ({from}, {to}) runs from a 1-vertex to a 0-vertex")]
    InconsistentSeed { from: usize, to: usize },
    #[error("NoSubbasis: completion host has no V_a/W_a families")]
    NoSubbasis,
    #[error("NotAnMpe: {0}")]
    NotAnMpe(String),
    #[error("HomInvalid: {0}")]
    HomInvalid(String),
    #[error("ImageNotMaximal: image of completion element {0} is not a maximal E-preserving map")]
    ImageNotMaximal(usize),
    #[error("TooLarge: size {size} exceeds limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("EmbeddingMismatch: embeddings have lengths {0} and {1}")]
    EmbeddingMismatch(usize, usize),
    #[error("EmbeddingFailed: {0}")]
    EmbeddingFailed(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
