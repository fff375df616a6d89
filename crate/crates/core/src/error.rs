use thiserror::Error;

/// Errors produced by the simulation library and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("could not realize connected RGG on {n} nodes after {attempts} draws")]
    RggRedrawLimit { n: usize, attempts: usize },

    #[error("graph has no node locations")]
    MissingLocations,

    #[error("matrix is not symmetric (entry ({row}, {col}) differs by {diff:e})")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error("nodes {0} and {1} are not neighbors")]
    NotNeighbors(usize, usize),

    #[error("node {0} has not heard from all of its neighbors")]
    InitializationIncomplete(usize),

    #[error("input vector is constant (already at consensus)")]
    ConstantVector,

    #[error("simulation did not converge: {0}")]
    NoConvergence(String),

    #[error("edge list parse error at line {line}: {msg}")]
    EdgeList { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True when the error stems from a bad configuration rather than a failure at run time.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::Config(_) => true,
            Error::Context { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
