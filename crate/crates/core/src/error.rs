use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a scenario needs at least 3 agents, got {0}")]
    TooFewAgents(usize),

    #[error("duplicate ideology {0} (agents must have pairwise distinct types)")]
    DuplicateIdeology(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid strategy profile: {0}")]
    InvalidProfile(String),

    #[error("agents {0} and {1} are not in dispute")]
    NotInDispute(usize, usize),

    #[error("best response for agent {agent} is not unimodal (local maxima near x={first} and x={second})")]
    NonUnimodal { agent: usize, first: f64, second: f64 },

    #[error("oracle limited to n ≤ {limit} (got n = {n})")]
    OracleTooLarge { n: usize, limit: usize },

    #[error("equilibrium search failed: {0}")]
    SolveFailed(String),

    #[error("unsupported schema version {0}")]
    Schema(u64),

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
