use thiserror::Error;

pub type Result<T, E = NciError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NciError {
    #[error("weight vector needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("weight {index} is invalid ({value}); weights must be finite and nonnegative")]
    InvalidWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, which is more than 1e-6 away from 1")]
    UnnormalizedWeights { sum: f64 },

    #[error("benchmark interaction {value:e} is not positive; the index is not informative")]
    DegenerateBenchmark { value: f64 },

    #[error("graph has no edges; the density-adjusted index is undefined")]
    EmptyGraph,

    #[error("probability {0} is outside (0, 1)")]
    InvalidProbability(f64),

    #[error("layer {layer} has {found} nodes, expected {expected}")]
    LayerMismatch { layer: usize, expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected} nodes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("node {node} is out of range for a graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix entry ({row}, {col}) = {value} is invalid")]
    InvalidEntry { row: usize, col: usize, value: f64 },

    #[error("degree sequence {0:?} is not graphical")]
    NonGraphicalSequence(Vec<usize>),

    #[error("exact solver is limited to {limit} nodes, got {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("deterministic scenario is defined for 10 nodes only, got {0}")]
    UnsupportedSize(usize),

    #[error("matrix must be square, got {rows} rows and {cols} columns")]
    NonSquare { rows: usize, cols: usize },

    #[error("price at row {row}, column {col} is not positive ({value})")]
    NonPositivePrice { row: usize, col: usize, value: f64 },

    #[error("column {0} has zero variance")]
    ZeroVariance(usize),

    #[error("value {0} is out of range")]
    OutOfRange(f64),

    #[error("distance ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("need at least {needed} observations, have {available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{failed} of {total} replications failed, above the 1% limit")]
    TooManyFailures { failed: usize, total: usize },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("labels not present in the weights file: {}", .0.join(", "))]
    LabelMismatch(Vec<String>),
}

impl NciError {
    pub(crate) fn parse(line: u64, message: impl Into<String>) -> Self {
        NciError::Parse { line, message: message.into() }
    }
}
