use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("matrix does not have full row rank (rank {rank}, rows {rows})")]
    RankDeficient { rank: usize, rows: usize },

    /// The structure matrix has rank below the number of central generators,
    /// so the central generators do not span the isolator of the derived subgroup.
    #[error("group is not normalized: structure matrix rank {rank} < m = {m}")]
    NotNormalized { rank: usize, m: usize },

    #[error("not an endomorphism: {0}")]
    NotEndomorphism(String),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("no integral induced map on the center exists for this x-part")]
    NoCenterMap,

    #[error("group is not in I(3,2): t13 = t23 = 0")]
    NotInI32,

    #[error("group is not in G(delta, lambda, Phi) template form: {0}")]
    NotTemplate(String),

    #[error("element budget exceeded: {size} > {budget}")]
    Budget { size: u128, budget: u64 },

    #[error("invalid modulus {0}: {1}")]
    InvalidModulus(u64, String),

    /// An internal cross-check failed. Indicates a bug, never bad input.
    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    #[error("{field}: {message}")]
    Format { field: String, message: String },
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format { field: field.into(), message: message.into() }
    }
}
