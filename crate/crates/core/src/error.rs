use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation mismatch: max_weight {0} vs {1}; coerce explicitly")]
    TruncationMismatch(i64, i64),
    #[error("inner argument of plethysm has a nonzero constant term")]
    ConstantTerm,
    #[error("argument is not in F^1: term of weight {weight} with hbar exponent {hexp_x2}/2")]
    NotPositive { weight: i64, hexp_x2: i32 },
    #[error("log requires constant term 1")]
    NotUnit,
    #[error("leading coefficient vanishes: {0}")]
    NoLeadingUnit(String),
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    BadPartition(Vec<u32>),
    #[error("unstable (g, n) = ({0}, {1})")]
    Unstable(u32, u32),
    #[error("character key {key:?} has weight {weight}, expected {n}")]
    CharacterWeight { key: Vec<u32>, weight: u32, n: u32 },
    #[error("not an element of Lambda_*: {0}")]
    NotStar(String),
    #[error("window too large for certified input: {0}")]
    Window(String),
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("schema violation at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("wrong quadratic normalization: {0}")]
    Normalization(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("involution is not self-inverse at flag {0}")]
    NotInvolution(usize),
    #[error("array length mismatch: {0}")]
    Length(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {vertex} is unstable: genus {genus}, valence {valence}")]
    UnstableVertex { vertex: usize, genus: u32, valence: usize },
    #[error("leg labels do not form a bijection onto 1..n: {0}")]
    LegLabels(String),
    #[error("flag {0} is not part of an edge")]
    NotAnEdge(usize),
    #[error("vertex {0} has no flags")]
    EmptyVertex(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
