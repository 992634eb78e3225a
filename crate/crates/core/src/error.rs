use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Division by an element that is not invertible. `witness` is the gcd of
    /// the divisor with the modulus (or `0` for a zero rational).
    #[error("division by a non-unit (gcd with modulus: {witness})")]
    NotAUnit { witness: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{what} exceeds the size guard ({value} > {limit})")]
    Guard { what: &'static str, value: u128, limit: u128 },

    /// A closed formula does not apply to these parameters.
    #[error("degenerate formula: {0}")]
    DegenerateFormula(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("random sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),

    /// Two independent computations of the same quantity disagreed.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn guard(what: &'static str, value: u128, limit: u128) -> Result<()> {
    if value > limit {
        Err(Error::Guard { what, value, limit })
    } else {
        Ok(())
    }
}
