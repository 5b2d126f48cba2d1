use crate::quiver::Vertex;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown Lie type label `{0}`")]
    UnknownLabel(String),
    #[error("rank {rank} out of range for family {family}")]
    RankOutOfRange { family: char, rank: usize },
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("no exact Laurent quotient exists")]
    ExactDivisionFailed,
    #[error("variable {0} occurs with negative exponent and its image is not a monomial")]
    NegativePowerOfNonMonomial(String),
    #[error("cannot parse polynomial: {0}")]
    PolyParse(String),

    #[error("truncation is empty")]
    EmptyTruncation,
    #[error("vertex {0} is not in the truncated quiver")]
    VertexNotInTruncation(Vertex),

    #[error("vertex {0} is frozen")]
    FrozenVertex(Vertex),
    #[error("vertex {0} not in the seed")]
    UnknownVertex(Vertex),

    #[error("no fundamental q-character available for node {i} at shift {r}")]
    MissingFundamental { i: usize, r: i64 },
    #[error("cyclic dependency while solving T-system at (i={i}, k={k}, r={r})")]
    DependencyCycle { i: usize, k: i64, r: i64 },

    #[error("nodes {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("representation is not thin at vertex {0}")]
    NotThin(Vertex),
    #[error("monomial is not in the image lattice of the z-to-Y change of variables")]
    NotInImageLattice,
    #[error("no built-in modules for type {0}; supply a representation file")]
    UnsupportedType(String),

    #[error("strings are not in special position")]
    NotSpecialPosition,

    #[error("corrupt cache file: {0}")]
    CorruptCache(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
