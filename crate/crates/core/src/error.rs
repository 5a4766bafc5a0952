use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(&'static str),

    #[error("domain extent must be positive, got {0}")]
    NonPositiveExtent(f64),

    #[error("need at least 4 nodes per axis, got {0}")]
    TooFewNodes(usize),

    #[error("field has {found} values, grid expects {expected}")]
    GridMismatch { expected: usize, found: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("fiber mismatch between fields")]
    FiberMismatch,

    #[error("metric is not flat and no connection coefficients are available")]
    NonFlatMetric,

    #[error("potential W = {value} is below 1 at node {node}")]
    PotentialBelowOne { node: usize, value: f64 },

    #[error("lowest eigenvalue {0} does not exceed 1")]
    HypothesisViolated(f64),

    #[error("derivative leaves the Lie algebra (residual {0:e})")]
    NotInAlgebra(f64),

    #[error("state reaches degree {degree}, truncation guard allows at most {limit}")]
    TruncationGuard { degree: usize, limit: usize },

    #[error("no cutoff sequence with uniformly bounded derivatives exists on this domain")]
    CutoffConditionViolated,

    #[error("test set is empty")]
    EmptyTestSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
