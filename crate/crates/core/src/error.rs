use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A function returned a non-finite value inside the interval it was probed on.
    #[error("`{name}` is not finite at x = {x} (got {value})")]
    EvaluationDomain { name: String, x: f64, value: f64 },

    #[error("expected a {expected} function, `{name}` is {found}")]
    KindMismatch { name: String, expected: &'static str, found: String },

    /// The result of a combinator failed re-classification.
    #[error("{op} produced `{name}`, which classifies as {found}")]
    ClosureViolation { op: &'static str, name: String, found: String },

    #[error("no positive epsilon keeps `{name}` positive and concave at scan resolution {resolution}")]
    NoValidEpsilon { name: String, resolution: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A factor of a product is not strictly positive.
    #[error("`{name}` evaluates to {value} at x = {x}; the product needs positive values on (0, eps]")]
    PositivityViolation { name: String, x: f64, value: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("term count {m} exceeds the configured cap {cap}")]
    ResourceLimit { m: u64, cap: u64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("fit failed: {0}")]
    Fit(String),
}
