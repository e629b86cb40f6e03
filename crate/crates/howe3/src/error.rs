use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 65536")]
    NotPrime(u64),
    #[error("tower level {requested} exceeds the configured maximum {max}")]
    LevelOverflow { requested: usize, max: usize },
    #[error("both polynomials are zero")]
    ZeroInputs,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("curve is not of genus one: {0}")]
    NotGenusOne(String),
    #[error("octic is not even in x")]
    NotSymmetric,
    #[error("f(0) = 0, the cover ramifies at zero")]
    RamifiedAtZero,
    #[error("a Weierstrass point lies at infinity")]
    InfinityRoot,
    #[error("no extra involution found")]
    NoExtraInvolution,
    #[error("no pair of commuting extra involutions found")]
    NoCommutingPair,
    #[error("invariant tuples have different genus tags")]
    GenusMismatch,
    #[error("characteristic {0} is too small for this invariant computation")]
    SmallCharacteristic(u32),
    #[error("quartic has no V4 subgroup of automorphisms")]
    NoV4,
    #[error("degenerate quotient: {0}")]
    DegenerateQuotient(String),
    #[error("system is not zero-dimensional")]
    NotZeroDimensional,
    #[error("b40, b04 and b00 must be nonzero")]
    ZeroCorner,
    #[error("vanishing denominator in {0}")]
    DegenerateDenominator(&'static str),
    #[error("parameters give a non-hyperelliptic curve")]
    NotHyperellipticCase,
    #[error("parameters give a hyperelliptic curve")]
    HyperellipticCase,
    #[error("bad quartic: {0}")]
    BadQuartic(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::LevelOverflow { .. } => 3,
            _ => 2,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::LevelOverflow { .. } => "LevelOverflow",
            Error::ZeroInputs => "ZeroInputs",
            Error::BadParameter(_) => "BadParameter",
            Error::NotGenusOne(_) => "NotGenusOne",
            Error::NotSymmetric => "NotSymmetric",
            Error::RamifiedAtZero => "RamifiedAtZero",
            Error::InfinityRoot => "InfinityRoot",
            Error::NoExtraInvolution => "NoExtraInvolution",
            Error::NoCommutingPair => "NoCommutingPair",
            Error::GenusMismatch => "GenusMismatch",
            Error::SmallCharacteristic(_) => "SmallCharacteristic",
            Error::NoV4 => "NoV4",
            Error::DegenerateQuotient(_) => "DegenerateQuotient",
            Error::NotZeroDimensional => "NotZeroDimensional",
            Error::ZeroCorner => "ZeroCorner",
            Error::DegenerateDenominator(_) => "DegenerateDenominator",
            Error::NotHyperellipticCase => "NotHyperellipticCase",
            Error::HyperellipticCase => "HyperellipticCase",
            Error::BadQuartic(_) => "BadQuartic",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::Parse(_) => "Parse",
            Error::FieldMismatch(_) => "FieldMismatch",
        }
    }
}
