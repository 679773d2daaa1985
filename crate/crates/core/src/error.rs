use thiserror::Error;

/// Which budget a computation ran out of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resource {
    Covers,
    Nodes,
    Colorings,
}

impl std::fmt::Display for Resource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Resource::Covers => write!(f, "cover enumeration"),
            Resource::Nodes => write!(f, "search nodes"),
            Resource::Colorings => write!(f, "enumerated colorings"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph6 parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("edge list parse error on line {line}: {message}")]
    EdgeList { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("{resource} cap of {cap} exceeded")]
    CapExceeded { resource: Resource, cap: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("cover is not full")]
    NotFull,

    #[error("cover does not have a uniform fold")]
    NonUniformFold,

    #[error("base graph is disconnected")]
    Disconnected,

    #[error("out of domain: {0}")]
    Domain(String),

    #[error("block {block}: retry cap of {attempts} attempts exhausted")]
    RetryCapExhausted { block: usize, attempts: usize },

    #[error("certificate error: {0}")]
    Certificate(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Budgets for exhaustive searches. Exceeding one is always an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of covers a single enumeration may visit.
    pub covers: u64,
    /// Maximum number of search nodes a single solve may expand.
    pub nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            covers: 10_000_000,
            nodes: 10_000_000,
        }
    }
}
