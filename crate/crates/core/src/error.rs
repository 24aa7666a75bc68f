use thiserror::Error;

use crate::spherical::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid simple type {letter}{rank}")]
    InvalidType { letter: char, rank: usize },

    #[error("cannot parse `{0}` as a simple type (expected e.g. A3, D4, E8)")]
    UnparsableType(String),

    #[error("node {index} out of range for rank {rank}")]
    NodeOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("type mismatch: data lives on {data}, real form lives on {form}")]
    TypeMismatch { data: String, form: String },

    #[error("corrupt Satake data for {form}: {reason}")]
    CorruptSatake { form: String, reason: String },

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("module of highest weight {0} is not self-conjugate, its Cartan index is undefined")]
    NotSelfConjugate(String),

    #[error("Cartan index data unavailable for {0}")]
    IndexDataUnavailable(String),

    #[error("no real form catalog for type {0}")]
    UnsupportedCatalog(String),

    #[error("unknown real form `{form}` for type {ty}")]
    UnknownForm { form: String, ty: String },

    #[error("invalid spherical system: {}", join(.0))]
    InvalidSystem(Vec<Violation>),

    #[error("invalid Luna-Vust datum: {0}")]
    InvalidDatum(String),

    #[error("invalid weight monoid: {0}")]
    InvalidMonoid(String),

    #[error("rank {0} is too large for exhaustive orbit enumeration (limit 20)")]
    RankTooLarge(usize),

    #[error("criterion inapplicable: {0}")]
    Inapplicable(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("{0}")]
    Schema(String),
}

impl Error {
    /// Errors that mean the data was fine but the theorem behind a criterion
    /// does not cover it.
    pub fn is_inapplicable(&self) -> bool {
        matches!(self, Error::Inapplicable(_))
    }
}

fn join(vs: &[Violation]) -> String {
    vs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
