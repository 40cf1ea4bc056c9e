use thiserror::Error;

/// Errors shared by all modules of the crate.
///
/// Element indices in messages are 1-based, matching the Cayley file format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error(
        "associativity fails at ({x},{y},{z}): ({x}*{y})*{z} = {lhs} but {x}*({y}*{z}) = {rhs}"
    )]
    NotAssociative {
        x: usize,
        y: usize,
        z: usize,
        lhs: usize,
        rhs: usize,
    },

    #[error("table entry {value} out of range 1..={size} (row {row}, column {col})")]
    IndexOutOfRange {
        value: usize,
        size: usize,
        row: usize,
        col: usize,
    },

    #[error("element index {index} out of range 1..={size}")]
    NoSuchElement { index: usize, size: usize },

    #[error("generator image {index} out of range 1..={size} for letter '{letter}'")]
    BadGenerator {
        letter: char,
        index: usize,
        size: usize,
    },

    #[error("element {element} is not a product of the given generators")]
    NotGenerated { element: usize },

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("transformation {index} maps {point} to {image}, outside 1..={degree}")]
    BadTransformation {
        index: usize,
        point: usize,
        image: usize,
        degree: usize,
    },

    #[error("semigroup has no generator map")]
    MissingGenerators,

    #[error("letter '{0}' has no image under the given map")]
    UnmappedLetter(char),

    #[error("semigroup is not aperiodic")]
    NotAperiodic,

    #[error("semigroup is not unambiguous")]
    NotUnambiguous,

    #[error("no unambiguous cover found within {rounds} expansion rounds (last size {last_size})")]
    CoverCapExceeded { rounds: usize, last_size: usize },

    #[error("term is not in normal form: {term}")]
    NotNormalized { term: String },

    #[error("prefix length {wanted} exceeds the term length {len}")]
    PrefixTooLong { wanted: usize, len: usize },

    #[error("invalid position: {0}")]
    InvalidPosition(String),

    #[error("recognizer search exceeded {cap} visited states")]
    SearchCapExceeded { cap: u64 },

    #[error("no words of length {0} are materialized")]
    EmptyLength(usize),

    #[error("invalid expansion word: {0}")]
    BadExpansion(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
