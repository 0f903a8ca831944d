use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what}: size {size} exceeds the enumeration limit {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },

    #[error("graph has an odd number of vertices ({0}); no perfect matching")]
    OddVertexCount(usize),

    #[error("graph has no perfect matching")]
    NoPerfectMatching,

    #[error("projection did not converge after {cycles} cycles (residual {residual:e})")]
    ProjectionDiverged { cycles: usize, residual: f64 },

    #[error("profit grid needs {cells} cells, cap is {cap}")]
    GridOverflow { cells: usize, cap: usize },

    #[error("profit {index} is not an integer multiple of the grid unit")]
    OffGrid { index: usize },

    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),

    #[error("learner played a set that is not a vertex cover")]
    NotACover,

    #[error("oracle returned a negative perturbed objective ({0})")]
    NegativePayoff(f64),

    #[error("trace has no hindsight benchmark")]
    MissingBenchmark,

    #[error("round {round}: {source}")]
    AtRound {
        round: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("seed {seed}: {source}")]
    AtSeed {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn at_round(self, round: usize) -> Self {
        Error::AtRound { round, source: Box::new(self) }
    }

    pub(crate) fn at_seed(self, seed: u64) -> Self {
        Error::AtSeed { seed, source: Box::new(self) }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
