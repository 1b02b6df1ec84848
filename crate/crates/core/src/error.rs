use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A basis label component is outside its party's dimension.
    #[error("basis label {label:?} out of range for dims {dims:?}")]
    Domain { label: Vec<usize>, dims: Vec<usize> },

    /// Input carries no information (all-zero coefficients, empty set).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A construction parameter is outside the stated domain of its family.
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The set is not orthonormal; carries the first offending Gram entry.
    #[error("states {i} and {j} are not orthonormal: |G[{i},{j}] - delta| = {deviation:e}")]
    NotOrthonormal { i: usize, j: usize, deviation: f64 },

    /// A state's regrouped matrix has weight outside an effective frame.
    #[error("state not supported on frame: out-of-frame residual {residual:e}")]
    Support { residual: f64 },
}
