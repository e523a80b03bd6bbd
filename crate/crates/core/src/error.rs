use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field F_{{{p}^{m}}} exceeds the configured size bound")]
    FieldTooLarge { p: u64, m: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{d} does not divide q - 1 = {q_minus_one}")]
    NoRootsOfUnity { d: u64, q_minus_one: u128 },

    #[error("element is not a {d}-th root of unity")]
    NotRootOfUnity { d: u64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("representation is invalid: {0}")]
    InvalidRep(String),

    #[error("saturation cap {cap} exceeded; fixed-point dimensions by degree: {profile:?}")]
    SaturationCap { cap: usize, profile: Vec<usize> },

    #[error("precision window too small: {0}")]
    Window(String),

    #[error("recursion cap {cap} exceeded (needed {needed})")]
    RecursionCap { cap: u64, needed: u64 },

    #[error("zero series has no level")]
    ZeroSeries,

    #[error("filtration hypothesis fails: {0}")]
    Hypothesis(String),

    #[error("module is not split near the divisor: extension class {0}")]
    NotSplit(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors caused by a resource cap rather than by bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::SaturationCap { .. } | Error::RecursionCap { .. })
    }
}
