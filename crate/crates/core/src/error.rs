use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector for `{0}`: cosine similarity is undefined")]
    ZeroVector(String),

    #[error("non-finite component in vector for `{0}`")]
    NonFinite(String),

    #[error("duplicate vocabulary entry `{word}` (line {line})")]
    DuplicateWord { word: String, line: usize },

    #[error("out-of-vocabulary word `{0}`")]
    OutOfVocabulary(String),

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("word scores have zero variance: effect size is undefined")]
    DegenerateVariance,

    #[error("attribute sets `{0}` and `{1}` have equal centroids")]
    EqualCentroids(String, String),

    #[error("every bias direction is degenerate; the subspace would be empty")]
    EmptySubspace,

    #[error("requested {requested} components but residual rank is {rank}")]
    RankDeficient { requested: usize, rank: usize },

    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("exact enumeration needs {count} partitions (limit {limit})")]
    PartitionOverflow { count: u128, limit: u128 },

    #[error("zero variance: R² is undefined")]
    Undefined,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Config(Vec<String>),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line tool: 1 for input and
    /// configuration problems, 2 for runtime and numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Parse { .. }
            | Error::DuplicateWord { .. }
            | Error::OutOfVocabulary(_)
            | Error::InvalidParameter(_)
            | Error::Json(_)
            | Error::Io { .. } => 1,
            _ => 2,
        }
    }
}
