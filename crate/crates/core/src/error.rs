use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^63")]
    InvalidModulus(u64),
    #[error("polynomials live in different rings ({left} vs {right} variables)")]
    ArityMismatch { left: usize, right: usize },
    #[error("division leaves a nonzero remainder")]
    NotDivisible,
    #[error("characteristic {p} does not exceed degree {degree}; square-free decomposition would collapse p-th powers")]
    PthPowerHazard { p: u64, degree: u32 },
    #[error("operation needs a prime field but the session field is Q")]
    RationalModeUnsupported,
    #[error("minor size {s} outside 1..={max}")]
    SOutOfRange { s: usize, max: usize },
    #[error("every 3-minor of the Jacobian vanishes (I_3(J) = 0)")]
    AllMinorsZero,
    #[error("characteristic {p} divides the degree {d}")]
    CharDividesDegree { p: u64, d: u32 },
    #[error("the minor gcd does not divide signed minor D{index}")]
    FDoesNotDivideMinor { index: usize },
    #[error("change-of-basis matrix is singular")]
    SingularChange,
    #[error("point makes every combination T_i - p_i*l(T) vanish on the map")]
    AllCombinationsZero,
    #[error("degree chain violated: {0}")]
    ChainViolation(String),
    #[error("point is a base point: every form vanishes there")]
    BasePointError,
    #[error("form f{index} is not homogeneous")]
    NotHomogeneous { index: usize },
    #[error("form f{index} has degree {found}, expected {expected}")]
    MixedDegrees { index: usize, expected: u32, found: u32 },
    #[error("forms share the common factor {0}")]
    CommonFactor(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point has {found} coordinates, expected {expected}")]
    BadPoint { expected: usize, found: usize },
}
