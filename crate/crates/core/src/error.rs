use thiserror::Error;

/// Every failure the library can report. Variants name the violated
/// precondition and, where one exists, the offending parameter or factor.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NotPrime: p = {0} is not prime")]
    NotPrime(u64),
    #[error("ReducibleModulus: field modulus {0} is reducible over F_p")]
    ReducibleModulus(String),
    #[error("DegreeMismatch: expected a monic modulus of degree {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: String },
    #[error("FieldTooLarge: q = p^e = {p}^{e} exceeds 2^31")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("InvalidElement: {0}")]
    InvalidElement(String),
    #[error("ZeroArgument: discrete logarithm of zero")]
    ZeroArgument,
    #[error("TableUnavailable: q = {0} exceeds the 2^20 log-table threshold")]
    TableUnavailable(u64),
    #[error("DivisionByZeroPoly")]
    DivisionByZeroPoly,
    #[error("NotSquarefree: {0} has a repeated factor")]
    NotSquarefree(String),
    #[error("NotMonic: {0} is not monic")]
    NotMonic(String),
    #[error("ConstantModulus: modulus must have positive degree")]
    ConstantModulus,
    #[error("Reducible: {0} is not irreducible")]
    Reducible(String),
    #[error("TooLarge: {what} has {size} elements, limit {limit}")]
    TooLarge { what: String, size: u128, limit: u128 },
    #[error("ExponentOutOfRange: exponent {exponent} at factor {factor} must lie in [0, {max}]")]
    ExponentOutOfRange { factor: String, exponent: u64, max: u64 },
    #[error("ExponentCount: {got} exponents given for {expected} factors")]
    ExponentCount { expected: usize, got: usize },
    #[error("HypothesisViolation at factor {factor}: {clause}")]
    HypothesisViolation { factor: String, clause: String },
    #[error("NotPrimitive: character is trivial on factor {0}")]
    NotPrimitive(String),
    #[error("KTooSmall: k = {0} must be at least 2")]
    KTooSmall(u32),
    #[error("NotCoprime: {0} is not coprime to the modulus")]
    NotCoprime(String),
    #[error("DegreeTooLargeForCharacteristic: deg_T P = {d} requires p > d, p = {p}")]
    DegreeTooLargeForCharacteristic { d: usize, p: u64 },
    #[error("RingMismatch: trace functions live on different residue rings")]
    RingMismatch,
    #[error("XNotPowerOfQ: X = {x} is not q^n with 0 <= n <= {max_n} (q = {q})")]
    XNotPowerOfQ { x: u64, q: u64, max_n: u32 },
    #[error("NTooLarge: n = {n} exceeds deg g = {m}")]
    NTooLarge { n: u32, m: u32 },
    #[error("RangeViolation: {0}")]
    RangeViolation(String),
    #[error("NotIrreducible: {0} is not irreducible")]
    NotIrreducible(String),
    #[error("XTooLarge: X = q^{n} exceeds the modulus norm q^{m}")]
    XTooLarge { n: u32, m: u32 },
    #[error("CharacteristicTooSmall: deg_T P = {d} requires p > d, p = {p}")]
    CharacteristicTooSmall { d: usize, p: u64 },
    #[error("InvalidMetadata: {0}")]
    InvalidMetadata(String),
    #[error("ConfigParse: {0}")]
    ConfigParse(String),
    #[error("Validation: {0}")]
    Validation(String),
    #[error("Io: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
