use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),

    #[error("graph with {m}^{k} vertices exceeds the size cap of {cap}")]
    SizeCap { m: u32, k: u32, cap: u64 },

    #[error("invalid vertex: {0}")]
    InvalidVertex(String),

    #[error("rank {rank} out of range for {n_vertices} vertices")]
    RankOutOfRange { rank: u64, n_vertices: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vertex set is empty")]
    EmptySet,

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("matrix is not symmetric (max defect {defect:e})")]
    Asymmetric { defect: f64 },

    #[error("eigensolver did not converge for dim {dim} (max residual {max_residual:e}, budget {max_iterations} iterations)")]
    NoConvergence {
        dim: usize,
        max_iterations: usize,
        max_residual: f64,
    },

    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
