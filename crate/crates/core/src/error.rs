use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter fell outside its physical domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The closed-form bound is undefined for this hardware (negative radicand,
    /// nonpositive denominator, ...).
    #[error("bound inapplicable: {0}")]
    BoundInapplicable(String),

    #[error("root not found: {reason} (bracket [{lo:e}, {hi:e}], f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    RootNotFound {
        reason: String,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("no successful blocks in {trials} trials; wait-time statistics are empty")]
    EmptyStats { trials: u64 },

    #[error("degenerate regression: {0}")]
    DegenerateFit(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
