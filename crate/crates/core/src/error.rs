use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("degenerate scenario: {0}")]
    DegenerateScenario(String),

    #[error("invalid Gaussian model: {0}")]
    InvalidModel(String),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("objective returned NaN at {point:?}")]
    NanObjective { point: Vec<f64> },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("search needs {required} grid combinations, limit is {limit}")]
    Intractable { required: f64, limit: f64 },

    #[error("no input distribution satisfies the cost budgets")]
    NoFeasibleInput,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
