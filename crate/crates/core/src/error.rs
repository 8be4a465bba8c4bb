use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A point or index outside the support of a polynomial family.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Quadrature or summation failed to converge to the requested tolerance.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// Population leaked into the top retained levels of a truncated ladder.
    #[error("truncation error: tail population {tail:.3e} exceeds guard {guard:.3e} with {levels} levels")]
    Truncation { tail: f64, guard: f64, levels: usize },

    /// Step size collapsed below the representable resolution.
    #[error("step size underflow at t = {t}: h = {h:.3e}")]
    StepUnderflow { t: f64, h: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
