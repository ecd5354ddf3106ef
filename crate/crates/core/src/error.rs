use thiserror::Error;

/// Reason a graphon is excluded from the limit theory for a given pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// `W ≡ 1`: the count is deterministic.
    Complete,
    /// `t(H, W) = 0`: the pattern almost surely never appears.
    PatternFree,
}

impl std::fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degeneracy::Complete => write!(f, "graphon is complete (W = 1 everywhere)"),
            Degeneracy::PatternFree => write!(f, "graphon is pattern-free (t(H,W) = 0)"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex {vertex} out of range 1..={vertex_count}")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("({0},{1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("pattern too large: {0}")]
    PatternTooLarge(String),
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("invalid graphon: {0}")]
    InvalidGraphon(String),
    #[error("kernel is not symmetric at blocks ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("coordinate {0} outside [0,1]")]
    OutOfRange(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate input: {0}")]
    Degenerate(Degeneracy),
    #[error("no eigenvalue within {tolerance:e} of {target}")]
    EigenvalueNotFound { target: f64, tolerance: f64 },
    #[error("variance {0:e} is negative beyond rounding")]
    NegativeVariance(f64),
    #[error("empty sample")]
    EmptySample,
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
