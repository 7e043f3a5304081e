use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distance {distance}: {reason}")]
    InvalidDistance {
        distance: usize,
        reason: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matching problem has {0} nodes; a perfect matching needs an even count")]
    OddNodeCount(usize),

    #[error("no perfect matching exists on the given graph")]
    NoPerfectMatching,

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("inconsistent syndrome: {0}")]
    InconsistentSyndrome(String),

    #[error("internal consistency violated: {0}")]
    Internal(String),

    #[error("threshold fit failed: {0}")]
    FitDomain(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
