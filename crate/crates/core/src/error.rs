use thiserror::Error;

/// Everything that can go wrong in the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base sequence: {0}")]
    InvalidBase(String),

    #[error("objects are defined over different base sequences")]
    BaseMismatch,

    #[error("depth {depth} exceeds the configured limit of {limit}")]
    DepthLimit { depth: usize, limit: usize },

    #[error("residue {residue} out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: usize, modulus: usize },

    #[error("invalid digit {digit} at index {index} (radix {radix})")]
    InvalidDigit { index: usize, digit: usize, radix: usize },

    #[error("cocycle table has length {got}, expected {expected}")]
    TableLength { got: usize, expected: usize },

    #[error("cocycle does not define a bijection: residues {first} and {second} collide")]
    NotBijective { first: usize, second: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("clopen pieces overlap")]
    OverlappingPieces,

    #[error("images of the base set are not pairwise disjoint (maps {0} and {1})")]
    ImagesNotDisjoint(usize, usize),

    #[error("2-cycle image is not disjoint from its base set")]
    TwoCycleNotDisjoint,

    #[error("sets do not form a partition: {0}")]
    InvalidPartition(String),

    #[error("element has infinite order")]
    InfiniteOrder,

    #[error("element has nonzero index {0}")]
    NonzeroIndex(String),

    #[error("clopen set must be nonempty")]
    EmptySet,

    #[error("the two clopen sets do not intersect")]
    EmptyOverlap,

    #[error("support escapes the allowed set")]
    SupportEscapes,

    #[error("permutation moves a point outside its orbit")]
    CrossesOrbits,

    #[error("point sets intersect")]
    SetsIntersect,

    #[error("generator does not preserve the partition (part {part})")]
    PartitionNotPreserved { part: usize },

    #[error("finite model too large: {0} points (at most 8)")]
    ModelTooLarge(usize),

    #[error("subgroup closure exceeded {0} elements")]
    ClosureCap(usize),

    #[error("word length mismatch: expected at most {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
