use thiserror::Error;

use crate::indexsets::IndexDomain;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index domain mismatch: {0} vs {1}")]
    DomainMismatch(IndexDomain, IndexDomain),
    #[error("finite index domain must have between 1 and {max} elements, got {got}")]
    DomainSize { got: usize, max: usize },
    #[error("index {index} is outside {domain}")]
    IndexOutOfRange { index: u64, domain: IndexDomain },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue {residue} is not below modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("head element {index} is not below head length {len}")]
    HeadOutOfRange { index: u64, len: u64 },
    #[error("{op} needs the periodic omega domain")]
    NeedsOmega { op: &'static str },
    #[error("{op} needs a finite index domain")]
    NeedsFinite { op: &'static str },
    #[error("{what} is capped at {max}, got {got}")]
    TooLarge {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("ideal is improper (it contains the whole index set)")]
    ImproperIdeal,

    #[error("space has more than {max} points")]
    TooManyPoints { max: usize },
    #[error("duplicate point name {0:?}")]
    DuplicatePoint(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("point index {0} is outside the space")]
    PointOutOfRange(usize),
    #[error("the empty set is not listed as open")]
    MissingEmpty,
    #[error("the whole space is not listed as open")]
    MissingWhole,
    #[error("opens not closed under union: {0} and {1}")]
    NotUnionClosed(String, String),
    #[error("opens not closed under intersection: {0} and {1}")]
    NotIntersectionClosed(String, String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("map is not total or points outside the target")]
    InvalidMap,

    #[error("star modes need Fin, which is improper on a finite index domain")]
    StarOnFiniteDomain,
    #[error("cannot parse mode {input:?} at byte {pos}: {msg}")]
    ModeSyntax {
        input: String,
        pos: usize,
        msg: String,
    },
    #[error("unknown ideal name {0:?}")]
    UnknownIdeal(String),
    #[error("function sequence needs a non-empty value list")]
    EmptyFunction,
    #[error("oracle witness search needs {needed} candidates, over the budget of {budget}")]
    OracleBudget { needed: u128, budget: u64 },

    #[error("cluster set must be non-empty")]
    EmptyClusterTarget,
    #[error("cluster set is not closed")]
    NotClosed,
    #[error("ideals fail the ideality condition")]
    IdealityFails,
    #[error("no admissible partition up to modulus {max_modulus}: {detail}")]
    NoPartition { max_modulus: u64, detail: String },

    #[error("openness evaluators disagree on {set}: characterization says {characterization}, search says {search}")]
    MethodDisagreement {
        set: String,
        characterization: bool,
        search: bool,
    },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
