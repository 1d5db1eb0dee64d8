use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("class is not {p}-integral: denominator of {coeff} is divisible by {p}")]
    NonIntegralClass { p: u64, coeff: String },

    #[error("constant term is not invertible")]
    NotInvertible,

    #[error("composition requires vanishing constant term")]
    NonzeroConstantTerm,

    #[error("{0} is not an odd prime")]
    BadPrime(u64),

    #[error("bernoulli index {0} is odd; only even indices are defined here")]
    OddBernoulliIndex(u64),

    #[error("series has constant term {0}; use genus_product for unnormalized series")]
    NotNormalized(String),

    #[error("invalid manifold descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("dimension {0} is not congruent to 1 mod 4")]
    WrongDimensionClass(u32),

    #[error("no splitting value for n = 3 mod 4: the extension needs none")]
    NoSplittingNeeded,

    #[error("missing bordism table entry for n = {0}")]
    MissingBordismEntry(u32),

    #[error("no Steenrod action configured for generator {0}")]
    MissingAction(String),

    #[error("model has no fundamental class")]
    MissingFundamentalClass,

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("fixture not found: {0}")]
    FixtureNotFound(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
