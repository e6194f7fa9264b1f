use thiserror::Error;

/// Errors raised by constructions and queries.
///
/// Structural verdicts (a graph failing the string property, a cover being
/// disconnected, a maniplex being stable) are never errors; they are reported
/// as values. Errors signal malformed input or violated preconditions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("colour {colour} out of range for rank {rank}")]
    ColourOutOfRange { colour: usize, rank: usize },

    #[error("flag {flag} out of range ({num_flags} flags)")]
    FlagOutOfRange { flag: usize, num_flags: usize },

    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("walk precondition violated: {0}")]
    Walk(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("maniplex is orientable; its double cover is disconnected")]
    Orientable,

    #[error("maniplex carries no facet labels")]
    MissingFacetLabels,

    #[error("{bits} label bits exceed the cap of {cap}")]
    LabelOverflow { bits: usize, cap: usize },

    #[error("colouring is not invariant under the given automorphism")]
    NotInvariant,

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("invalid colouring: {0}")]
    InvalidColouring(String),

    #[error("construction check failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
