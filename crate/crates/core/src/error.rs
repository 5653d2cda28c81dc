use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("population exhausted: no susceptible individual left")]
    PopulationExhausted,

    #[error("objective undefined at point (value {value})")]
    ObjectiveUndefined { value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown objective function '{0}'")]
    UnknownFunction(String),

    #[error("objective '{0}' is stochastic and needs a noise stream")]
    NeedsNoiseStream(String),

    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),

    #[error("weight mismatch: {0}")]
    WeightMismatch(String),

    #[error("empty input")]
    EmptyInput,

    #[error("degenerate pairs: all differences are zero")]
    DegeneratePairs,

    #[error("insufficient pairs: {0} non-zero differences, need at least 5")]
    InsufficientPairs(usize),

    #[error("invalid rank matrix: {0}")]
    InvalidMatrix(String),

    #[error("checkpoint {checkpoint} is beyond the configured {epochs} epochs")]
    CheckpointBeyondEpochs { checkpoint: usize, epochs: usize },

    #[error("malformed input at row {row}: {message}")]
    Malformed { row: usize, message: String },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// True for errors caused by user input rather than the environment.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
