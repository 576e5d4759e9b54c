use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("atom {index} has norm {norm:e}, below the zero-atom floor")]
    ZeroNormAtom { index: usize, norm: f64 },

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid weight range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },

    #[error("invalid exponent p = {0}; must be positive")]
    InvalidExponent(f64),

    #[error("invalid sparsity s = {s} for {len} coefficients")]
    InvalidSparsity { s: usize, len: usize },

    #[error("invalid coherence {0}; must lie in (0, 1]")]
    InvalidCoherence(f64),

    #[error("enumeration of {count} cases exceeds the cap of {cap}")]
    TooLarge { count: u128, cap: u128 },

    #[error("guarantee not applicable: mu*(2s-1) = {product} >= 1 (mu = {mu}, s = {s})")]
    NotApplicable { mu: f64, s: usize, product: f64 },

    #[error("residual is zero; no atom can be selected")]
    ZeroResidual,

    #[error("active set of {size} atoms is numerically rank deficient")]
    RankDeficientActiveSet { size: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("no coefficient vector reproduces the signal: {0}")]
    Infeasible(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::RankDeficientActiveSet { .. })
    }
}
