use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("environment exhausted after {rounds} rounds (horizon {horizon})")]
    EnvironmentExhausted { rounds: usize, horizon: usize },

    #[error("budget of resource {resource} went negative ({value}) at round {round}")]
    NegativeBudget {
        round: usize,
        resource: usize,
        value: f64,
    },

    #[error("void action violates the replenishment assumption: {0}")]
    VoidAssumption(String),

    #[error("translate/rescale is only sound for stochastic inputs")]
    AdversarialRescale,

    #[error("run (T = {horizon}, replication {replication}) failed: {source}")]
    Run {
        horizon: usize,
        replication: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error record.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::OutOfRange { .. } => "out_of_range",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::EnvironmentExhausted { .. } => "environment_exhausted",
            Error::NegativeBudget { .. } => "negative_budget",
            Error::VoidAssumption(_) => "void_assumption",
            Error::AdversarialRescale => "adversarial_rescale",
            Error::Run { source, .. } => source.kind(),
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub(crate) fn ensure_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
