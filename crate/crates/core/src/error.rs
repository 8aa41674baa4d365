use thiserror::Error;

use crate::perm::Perm;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),

    #[error("arity mismatch: root has {expected} positions but {found} arguments were given")]
    ArityMismatch { expected: usize, found: usize },

    #[error("size {n} exceeds the enumeration cap {cap}")]
    OracleCapExceeded { n: usize, cap: usize },

    #[error("cannot combine restrictions of different flavors")]
    FlavorMismatch,

    #[error("{0} is not a simple permutation")]
    NotSimple(Perm),

    #[error("simple permutation {simple} contains basis element {pattern}")]
    SimpleNotInClass { simple: Perm, pattern: Perm },

    #[error("malformed restriction term: {0}")]
    MalformedTerm(String),

    #[error("the set of simple permutations is truncated at size {cap}; refusing to build a specification")]
    SimplesTruncated { cap: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("expected a disjoint system, found an ambiguous one")]
    AmbiguousSystem,

    #[error("system is not closed: {0} is used but never defined")]
    OpenSystem(String),

    #[error("disambiguation exceeded {0} equations")]
    IterationBound(usize),

    #[error("the class has no member of size {0}")]
    EmptySizeClass(usize),

    #[error("size {n} exceeds the count table depth {depth}")]
    DepthExceeded { n: usize, depth: usize },

    #[error("generating function evaluation diverges at z = {0}")]
    Divergent(f64),

    #[error("no draw landed in the size window after {0} attempts")]
    RejectionBudget(usize),

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
