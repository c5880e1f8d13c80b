use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension {dim} exceeds the enumeration limit of {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("code of length {n} and dimension {dim} is too large on both sides for enumeration")]
    BothSidesTooLarge { n: usize, dim: usize },

    #[error("invalid weight distribution: {0}")]
    InvalidDistribution(String),

    #[error("vector already lies in the code")]
    MemberVector,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("residue code is not admissible: {0}")]
    NotAdmissible(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("length {0} is outside the supported range of the decomposition checker (n <= 47)")]
    LengthGuard(usize),

    #[error("code has {log2_size} bits of codewords, above the enumeration limit of {limit}")]
    SizeGuard { log2_size: usize, limit: usize },

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("ragged rows: line {line} has length {got}, expected {expected}")]
    RaggedRows { line: usize, expected: usize, got: usize },

    #[error("malformed block {index}: {message}")]
    MalformedBlock { index: usize, message: String },

    #[error("unknown artifact `{0}`")]
    UnknownArtifact(String),

    #[error("hypotheses violated: {}", .0.join("; "))]
    Hypothesis(Vec<String>),

    #[error("search budget of {budget} candidates exhausted without an extremal code")]
    BudgetExhausted { budget: u64 },

    #[error("radius {0} is above the supported maximum of 3")]
    RadiusTooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
