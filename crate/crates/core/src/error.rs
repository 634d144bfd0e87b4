use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("incompatible quadratic fields Q(√{0}) and Q(√{1})")]
    FieldMismatch(u32, u32),

    #[error("radicand {0} is not a square-free integer greater than 1")]
    BadRadicand(u32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("frequency vector is resonant: (alpha, J) = 0 for J = {0:?}")]
    Resonant(Vec<i64>),

    #[error("resonant divisor (alpha + w, J) with J = {0:?}")]
    ResonantDivisor(Vec<i64>),

    #[error("evaluation point lies within {tol:e} of the hyperplane J = {form:?}")]
    PoleProximity { form: Vec<i64>, tol: f64 },

    #[error("denominator form J = {0:?} vanishes at the origin")]
    PoleAtOrigin(Vec<i64>),

    #[error("derivation order {0} is not positive")]
    NonPositiveOrder(i32),

    #[error("declared order {declared} exceeds the actual order {actual}")]
    OrderViolation { declared: i32, actual: i32 },

    #[error("series has coefficients depending on w")]
    OmegaDependent,

    #[error("series is not an element of I^2")]
    NotInIdealSquare,

    #[error("increment S_{step} is not in R0 + I^2")]
    MembershipViolation { step: u32 },

    #[error("truncation order {available} cannot cover degree {needed}")]
    WindowUnderflow { needed: u32, available: u32 },

    #[error("malformed quadratic part: {0}")]
    MalformedQuadratic(String),

    #[error("Jacobian at the origin is singular")]
    JacobianSingular,

    #[error("consistency failure at {monomial}: expected {expected}, got {got}")]
    ConsistencyFailure { monomial: String, expected: String, got: String },

    #[error("Newton iteration diverged at truncation {0}")]
    NewtonDiverged(usize),

    #[error("root path came within {tol:e} of a pole at truncation {n}")]
    PoleCollision { n: usize, tol: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Errors caused by the input rather than by the mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Io(_)
                | Error::BadRadicand(_)
                | Error::FieldMismatch(..)
                | Error::DimensionMismatch { .. }
                | Error::MalformedQuadratic(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
