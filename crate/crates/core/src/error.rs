use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arguments are not coprime: gcd({a}, {b}) = {gcd}")]
    NotCoprime { a: String, b: String, gcd: String },

    #[error("modulus must be at least 1, got {0}")]
    InvalidModulus(String),

    #[error("{what} is out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("coefficient list has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid right triangle spec: {0}")]
    InvalidSpec(String),

    #[error("segment endpoints coincide")]
    DegenerateSegment,

    #[error("triangle has zero area")]
    DegenerateTriangle,

    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("polygon has zero area")]
    DegenerateArea,

    #[error("polygon is not simple: {0}")]
    SelfIntersecting(String),

    #[error("quasipolynomial fit failed verification for residue {residue} (t = {t})")]
    FitMismatch { residue: usize, t: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn not_coprime(
        a: &num_bigint::BigInt,
        b: &num_bigint::BigInt,
        gcd: &num_bigint::BigInt,
    ) -> Self {
        Error::NotCoprime {
            a: a.to_string(),
            b: b.to_string(),
            gcd: gcd.to_string(),
        }
    }

    /// True for the errors that mean "this is not a usable polygon".
    pub fn is_invalid_polygon(&self) -> bool {
        matches!(
            self,
            Error::TooFewVertices(_) | Error::DegenerateArea | Error::SelfIntersecting(_)
        )
    }
}
