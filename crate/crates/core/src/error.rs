use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// Index beyond a precomputed table.
    #[error("index {index} out of range (available: 0..={max})")]
    Range { index: usize, max: usize },

    /// A ladder coefficient squared is not strictly positive.
    #[error("spectrum is not ladder-representable: N_{index}^2 = {value:e} <= 0")]
    NotLadderRepresentable { index: usize, value: f64 },

    /// The closed-form levels disagree with one step of the characteristic function.
    #[error("recurrence check failed at level {index}: f(eps_n) = {mapped}, eps_(n+1) = {expected}")]
    Recurrence {
        index: usize,
        mapped: f64,
        expected: f64,
    },

    /// Fock truncation too small for the requested tail tolerance.
    #[error("truncation at dim {dim} leaves tail {tail:e}; need roughly dim >= {required}")]
    Truncation {
        dim: usize,
        tail: f64,
        required: usize,
    },

    /// Numerical routine did not reach its requested accuracy.
    #[error("accuracy target missed in {what}: error estimate {estimate:e}")]
    Accuracy { what: &'static str, estimate: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// No implementation exists for this spectrum/feature combination.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("expression error at byte {pos}: {msg}")]
    Expr { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}
