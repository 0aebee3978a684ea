use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("denominator {den} is divisible by p = {p}")]
    DenominatorDivisibleByP { p: u64, den: u64 },

    #[error("denominator must be positive")]
    ZeroDenominator,

    #[error("multiplicative order of {p} mod {den} exceeds the iteration cap {cap}")]
    OrderCapExceeded { p: u64, den: u64, cap: u64 },

    #[error("argument must be a nonzero class")]
    ZeroClass,

    #[error("both exponents {d} and {e} are divisible by p = {p}")]
    BothExponentsDivisibleByP { p: u64, d: u64, e: u64 },

    #[error("exponents must be positive")]
    ZeroExponent,

    #[error("search level r = {r} for p = {p} needs a grid of {grid} points, above the cap {cap}")]
    GridTooLarge {
        p: u64,
        r: u32,
        grid: u128,
        cap: u128,
    },

    #[error("field of size {p}^{r} exceeds the limit {limit}")]
    FieldTooLarge { p: u64, r: u32, limit: u64 },

    #[error("field of size {q} exceeds the triple-sum limit {limit}")]
    TripleSumTooLarge { q: u64, limit: u64 },

    #[error("operation requires characteristic 2, got p = {0}")]
    NotCharacteristicTwo(u64),

    #[error("the multiplicative character is undefined at zero")]
    CharacterAtZero,

    #[error("family {family} does not apply to p = {p}")]
    FamilyMismatch { family: String, p: u64 },

    #[error("malformed fraction {0:?}")]
    MalformedFraction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
