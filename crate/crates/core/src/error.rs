use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("rank {rank} out of range for n={n}")]
    RankOutOfRange { rank: u64, n: usize },
    #[error("partition syntax: {0}")]
    PartitionSyntax(String),
    #[error("mixed pattern lengths in partition ({0} and {1})")]
    MixedLengths(usize, usize),
    #[error("pattern {0} listed more than once")]
    DuplicatePattern(String),
    #[error("pattern length {c} exceeds the limit {max}")]
    PatternTooLong { c: usize, max: usize },
    #[error("n={n} exceeds the {mode} bound {bound}; about {required_mb} MB would be required")]
    TooLarge {
        n: usize,
        mode: &'static str,
        bound: usize,
        required_mb: u64,
    },
    #[error("need about {required_mb} MB but only {available_mb} MB is available")]
    InsufficientMemory { required_mb: u64, available_mb: u64 },
    #[error("class exceeds the size cap of {0} permutations")]
    ClassTooLarge(usize),
    #[error("unknown relation: {0}")]
    UnknownRelation(String),
    #[error("n={n} is outside the valid range (n >= {min}) for {relation}")]
    OutOfRange {
        relation: String,
        n: usize,
        min: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
