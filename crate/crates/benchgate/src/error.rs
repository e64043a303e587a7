//! Error type shared by all library modules.

use thiserror::Error;

/// Errors produced by metric, uncertainty, comparison, splitting, and
/// simulation operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A class required by the operation has no members.
    #[error("empty class: {0}")]
    EmptyClass(&'static str),

    /// An argument violated a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Every pair in a paired comparison is tied; no decision is possible.
    #[error("all pairs are tied")]
    AllTies,

    /// Both variance estimates are zero; an effect size is undefined.
    #[error("degenerate variance: both spread estimates are zero")]
    DegenerateVariance,

    /// Input collections have inconsistent shapes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Fewer distinct groups than requested folds.
    #[error("too few groups: {distinct} distinct groups for {k} folds")]
    TooFewGroups { distinct: usize, k: usize },

    /// Training data contains only one class.
    #[error("single class: training data must contain both classes")]
    SingleClass,

    /// An iterative procedure failed to converge.
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
