use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("modulus {0} is even; the process needs an odd modulus")]
    EvenModulus(u64),
    #[error("modulus {0} is too small (need p >= 3)")]
    ModulusTooSmall(u64),
    #[error("multiplier {multiplier} is not invertible mod {modulus}")]
    NonInvertibleMultiplier { multiplier: i64, modulus: u64 },
    #[error("bad increment distribution: {0}")]
    BadDistribution(&'static str),
    #[error("digit string of length {0} exceeds the 126-digit fixed-width path")]
    LengthOverflow(usize),
    #[error("invalid digit character {0:?}")]
    InvalidDigit(char),
    #[error("modulus mismatch: vector has {vector}, parameters have {params}")]
    ModulusMismatch { vector: u64, params: u64 },
    #[error("modulus {modulus} exceeds the dense-vector limit {limit}")]
    ModulusTooLarge { modulus: u64, limit: u64 },
    #[error("block decomposition needs a nonzero digit string")]
    WrongClass,
    #[error("pair statistics are undefined for the all-zero string")]
    AllZeroInput,
    #[error("length {n} is too large for exhaustive enumeration (max {max})")]
    TooLarge { n: usize, max: usize },
    #[error("statistics require multiplier 2 and uniform increments")]
    UnsupportedParams,
    #[error("parameter outside its domain: {0}")]
    DomainError(&'static str),
    #[error("summation range is empty")]
    EmptyRange,
    #[error("counting region is empty")]
    EmptyRegion,
}
