use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("word width {found} does not match ambient size {expected}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("code size n={0} is outside the supported range 1..=64")]
    UnsupportedLength(usize),

    #[error("vector is at level {found}, expected level {expected}")]
    LevelMismatch { expected: usize, found: usize },

    #[error("p={p}, q={q} must be coprime and both greater than 1")]
    InvalidMinimalModel { p: i64, q: i64 },

    #[error("the full set is not a codeword")]
    MissingFullSet,

    #[error("no closed-form L_T(0) eigenvalue for mixed weight vector {0}")]
    MixedWeights(String),

    #[error("inadmissible input: {0}")]
    Inadmissible(String),

    #[error("degenerate Gram matrix at level {0}")]
    DegenerateGram(usize),

    #[error("lattice at level {0} is not of full rank")]
    RankDeficient(usize),

    #[error("ambient spaces differ: {0}")]
    AmbientMismatch(String),

    #[error("missing lowest-weight table entry for {0}")]
    MissingTableEntry(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
