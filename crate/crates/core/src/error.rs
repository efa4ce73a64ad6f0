use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate colocation: nodes {0} and {1} share a position")]
    DegenerateColocation(String, String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid power configuration: {0}")]
    InvalidPower(String),

    #[error("incomplete allocation: {0}")]
    IncompleteAllocation(String),

    #[error("nonpositive argument to logarithm in utility of {0}")]
    NonPositiveLog(String),

    #[error("infeasible matching: row {0} has no allowed edge")]
    InfeasibleMatching(usize),

    #[error("QoS infeasible even without D2D interference for cellular user {0}")]
    QosInfeasible(usize),

    #[error("oracle scale exceeded: {0} states (limit {1})")]
    OracleScaleExceeded(u128, u128),

    #[error("empty cluster on channel {0}")]
    EmptyCluster(usize),

    #[error("empty Nash set")]
    EmptyNashSet,

    #[error("best Nash welfare {0} is not positive; price of stability undefined")]
    NonPositiveWelfare(f64),

    #[error("no jointly feasible profile under the SIR targets")]
    NoFeasibleProfile,

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid learner parameters: {0}")]
    InvalidParams(String),

    #[error("payoff table: {0}")]
    PayoffTable(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Errors that mean "the instance has no admissible solution" rather than
    /// "the input is broken".
    pub fn is_infeasibility(&self) -> bool {
        matches!(
            self,
            Error::InfeasibleMatching(_) | Error::QosInfeasible(_) | Error::NoFeasibleProfile
        )
    }
}
