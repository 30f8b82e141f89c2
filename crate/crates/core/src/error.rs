use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate object name {0:?}")]
    DuplicateObject(String),
    #[error("duplicate attribute name {0:?}")]
    DuplicateAttribute(String),
    #[error("incidence row {row} has width {found}, expected {expected}")]
    RowWidth { row: usize, expected: usize, found: usize },
    #[error("expected {expected} incidence rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("concept lattice exceeds the cap of {limit} concepts")]
    TooManyConcepts { limit: usize },
    #[error("{what} of size {size} exceeds the brute-force limit of {limit}")]
    OracleLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("unknown concept id {0}")]
    UnknownConcept(usize),
    #[error("concept {upper} is not an upper cover of concept {concept}")]
    NotUpperCover { concept: usize, upper: usize },
    #[error("candidate generator is not a subset of the intent")]
    NotSubsetOfIntent,
    #[error("attribute {0} is not in the concept intent")]
    AttributeNotInIntent(usize),
    #[error("unknown activation {0:?}")]
    UnknownActivation(String),
    #[error("split ratio {0} is outside (0, 1)")]
    SplitRatio(f64),
    #[error("cannot split a context with {0} objects")]
    TooFewObjects(usize),
    #[error("object index {0} is out of range or repeated")]
    BadPartition(usize),
    #[error("attribute universes of the two lattices differ")]
    AttributeMismatch,
    #[error("correlation needs at least 2 pairs, got {0}")]
    TooFewPairs(usize),
    #[error("elapsed-time list is empty")]
    EmptyTimings,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
