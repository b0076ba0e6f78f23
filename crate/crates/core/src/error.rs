use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element sets differ: {0}")]
    MismatchedElements(String),

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid bundle graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("random {k}-regular bipartite construction on {n} nodes exceeded {budget} restarts")]
    RestartBudgetExceeded { n: usize, k: usize, budget: usize },

    #[error("noisy ranking sampler infeasible for k={k}, q={q:.4}: no acyclic tournament after {attempts} attempts")]
    NoiseInfeasible { k: usize, q: f64, attempts: u64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("config: {0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
