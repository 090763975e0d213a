use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element}: set index {index} out of range (m = {m})")]
    IndexOutOfRange {
        element: usize,
        index: usize,
        m: usize,
    },

    #[error("element {element}: duplicate set index {index} in column")]
    DuplicateIndex { element: usize, index: usize },

    #[error("element {element}: column not sorted")]
    UnsortedColumn { element: usize },

    #[error("element index {index} out of range (n = {n})")]
    ElementOutOfRange { index: usize, n: usize },

    #[error("set index {index} out of range (m = {m})")]
    SetOutOfRange { index: usize, m: usize },

    #[error("sparsity t = {t} exceeds set count m = {m}")]
    SparsityTooLarge { t: usize, m: usize },

    #[error("sparsity t = {t} outside supported range [{min}, {max}]")]
    SparsityOutOfRange { t: usize, min: usize, max: usize },

    #[error("instance too large for exact solver: n = {n}, limit {limit}")]
    InstanceTooLarge { n: usize, limit: usize },

    #[error("vector of length {len} does not match m = {m}")]
    LengthMismatch { len: usize, m: usize },

    #[error("vector is not a lattice member: coordinate sum {sum} not divisible by t = {t}")]
    NotLatticeMember { sum: i64, t: usize },

    #[error("multiplicity gate failed: min multiplicity {min} < 7 ({missing} of {total} columns missing)")]
    MultiplicityGate { min: u64, missing: u64, total: u64 },

    #[error("lattice coloring needs r_{rank} >= |c_{rank}| but {r} < {c}")]
    MultiplicityTooSmall { rank: u64, r: u64, c: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
