use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain specification: {0}")]
    InvalidSpec(String),

    #[error("state {0} is not part of the state space")]
    InvalidState(String),

    #[error("horizon {horizon} exceeds the configured cap {cap}")]
    HorizonTooLarge { horizon: usize, cap: usize },

    #[error("kernel is not transient (spectral radius estimate {radius:.12})")]
    NotTransient { radius: f64 },

    #[error("path enumeration exceeds the budget of {budget} paths")]
    BudgetExceeded { budget: usize },

    #[error("empty path")]
    EmptyPath,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("conditioning event has zero probability")]
    ZeroProbability,

    #[error("kernel is not vertex-transitive: {0}")]
    NotTransitive(String),

    #[error("kernel is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
