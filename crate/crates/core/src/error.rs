use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not prime or is out of range (2 <= p < 65536)")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u32, u32),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("vertex {0} is neither a sink nor a source")]
    NotSinkOrSource(u32),
    #[error("quiver is not of Dynkin type A or D")]
    NotDynkin,
    #[error("operation requires an equioriented type A quiver")]
    NotEquioriented,
    #[error("morphism does not commute at arrow {0}")]
    NotAMorphism(usize),
    #[error("unknown indecomposable label `{0}`")]
    UnknownLabel(String),
    #[error("representation does not decompose over the catalog: {0}")]
    Undecomposable(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("predicate does not define a lower ideal: {0}")]
    NotLowerIdeal(String),
    #[error("Groebner basis is truncated: {0}")]
    Truncated(String),
    #[error("interpolation needs at least {needed} nodes, got {got}")]
    TooFewNodes { needed: usize, got: usize },
    #[error("missing prerequisite: {0}")]
    Missing(String),
}

pub type Result<T> = std::result::Result<T, Error>;
