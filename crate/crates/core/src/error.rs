use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid field specification: {0}")]
    InvalidField(String),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("irreducibility is undefined for constant polynomials")]
    ConstantPolynomial,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what} too large: {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("prime {0} ramifies in the extension")]
    Ramified(String),

    #[error("the infinite prime is not allowed here")]
    InfinitePrime,

    #[error("no KMS states for β < 0")]
    NegativeBeta,

    #[error("β out of range: {0}")]
    BetaOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ring mismatch in twisted polynomial arithmetic")]
    RingMismatch,

    #[error("generator {0} is not monic")]
    NonMonic(String),

    #[error("torsion of {modulus} not rational over extensions of degree ≤ {bound} above the residue field at {prime}")]
    TorsionNotFound {
        modulus: String,
        prime: String,
        bound: u32,
    },

    #[error("pairing functional is not perfect for modulus {0}")]
    PairingNotPerfect(String),

    #[error("divisor membership undecidable: prime {0} exceeds the character table degree {1}; raise dmax")]
    Undecidable(String, u32),

    #[error("transform touches valuation {valuation} beyond the cap {cap}")]
    CappedValuation { valuation: u32, cap: u32 },

    #[error("prime cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
