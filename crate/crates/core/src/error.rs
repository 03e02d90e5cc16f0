use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A document or argument failed validation. `field` names the offending input.
    #[error("{field}: {message}")]
    Parse { field: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sublevel set has infinite volume (sphere minimum {})", six_digits(*sphere_minimum))]
    InfiniteVolume { sphere_minimum: f64 },

    /// Importance weights collapsed onto a handful of samples.
    #[error(
        "importance weights are heavy-tailed (effective sample size {ess:.1} of {budget}); \
         the polynomial is close to the boundary of the finite-volume cone"
    )]
    Divergent { ess: f64, budget: usize },

    #[error("backend `{backend}` cannot handle this input: {reason}")]
    UnsupportedBackend { backend: &'static str, reason: String },

    #[error("closed form overflows for n = {n}, d = {d}")]
    Overflow { n: usize, d: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("moment table has no entry for alpha_times_q = {0}")]
    MissingMoment(String),

    #[error("convention mismatch: {0}")]
    ConventionMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Rounds to six significant digits for messages.
fn six_digits(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let scale = 10f64.powi(5 - v.abs().log10().floor() as i32);
    (v * scale).round() / scale
}

pub type Result<T> = std::result::Result<T, Error>;
