use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("prime or precision mismatch: {0}")]
    Mismatch(String),

    /// Field size above the configured desk-scale limit.
    #[error("field size {q} exceeds the configured limit {limit}")]
    QLimitExceeded { q: u128, limit: u64 },

    /// The requested p-adic precision cannot be represented in machine words.
    #[error("precision p^{m} with p = {p} does not fit the residue word size")]
    PrecisionTooLarge { p: u64, m: u32 },

    /// A computation ran out of p-adic (or l-adic) digits; retry with more precision.
    #[error("precision exhausted at M = {precision}: {what}")]
    PrecisionExhausted { precision: u32, what: String },

    #[error("element {0} is not a generator of the multiplicative group")]
    NotAGenerator(String),

    #[error("character argument is zero")]
    ZeroArgument,

    /// An identity that must hold unconditionally failed. Always a bug.
    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("cache: {0}")]
    Cache(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Cache(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Cache(e.to_string())
    }
}

impl Error {
    pub(crate) fn precision(precision: u32, what: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            precision,
            what: what.into(),
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Mismatch(_) => "mismatch",
            Error::QLimitExceeded { .. } => "q_limit_exceeded",
            Error::PrecisionTooLarge { .. } => "precision_too_large",
            Error::PrecisionExhausted { .. } => "precision_exhausted",
            Error::NotAGenerator(_) => "not_a_generator",
            Error::ZeroArgument => "zero_argument",
            Error::IdentityViolation(_) => "identity_violation",
            Error::Cache(_) => "cache",
        }
    }

    /// True for resource/precision failures (as opposed to broken identities).
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::QLimitExceeded { .. }
                | Error::PrecisionTooLarge { .. }
                | Error::PrecisionExhausted { .. }
        )
    }
}
