use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Geometry or option values outside their documented domain.
    InvalidConfig(&'static str),
    /// A point of the outer circle lies strictly inside the inner circle.
    DegenerateTangency { theta: f64, distance: f64, radius: f64 },
    /// A lift failed monotonicity, periodicity or produced a non-finite value.
    ContractViolation { what: &'static str, x: f64 },
    /// The requested rotation value is not attained on the bracket.
    NoSolution { p: i64, q: u64, lo: f64, hi: f64 },
    /// Bisection converged but no periodic orbit could be certified.
    ResidualFailure { t: f64, residual: f64 },
    /// A floating-point input cannot certify any further quotient.
    PrecisionExhausted { reliable_terms: usize },
    /// A family has a nonpositive parameter derivative.
    TwistViolation { t: f64, x: f64, derivative: f64 },
    /// Two lifts are not strictly ordered.
    OrderingViolation { x: f64, gap: f64 },
    /// The orbit returned before `n` steps or failed to close after `n`.
    PorismViolation { n: u64, step: u64, start: f64, distance: f64 },
    /// The number of located pairs differs from `e(n)/2`.
    CountMismatch { n: u64, found: usize, expected: u64 },
    /// A staircase reversed direction by more than its error radii.
    MonotonicityViolation { index: usize, t: f64, drop: f64 },
    /// A remainder exceeded the Fibonacci-reciprocal bound.
    RemainderBound { n: usize, remainder: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::DegenerateTangency { theta, distance, radius } => write!(
                f,
                "no tangent from angle {theta}: distance {distance} to the inner centre is below radius {radius}"
            ),
            Error::ContractViolation { what, x } => write!(f, "lift contract violated ({what}) at x = {x}"),
            Error::NoSolution { p, q, lo, hi } => {
                write!(f, "rotation value {p}/{q} is not attained on [{lo}, {hi}]")
            }
            Error::ResidualFailure { t, residual } => {
                write!(f, "no periodic orbit certified at t = {t} (residual {residual})")
            }
            Error::PrecisionExhausted { reliable_terms } => {
                write!(f, "floating input only certifies {reliable_terms} partial quotients")
            }
            Error::TwistViolation { t, x, derivative } => {
                write!(f, "twist condition fails at t = {t}, x = {x}: dg/dt = {derivative}")
            }
            Error::OrderingViolation { x, gap } => write!(f, "lifts are not ordered at x = {x} (gap {gap})"),
            Error::PorismViolation { n, step, start, distance } => write!(
                f,
                "orbit from {start} with period {n} violates closure at step {step} (distance {distance})"
            ),
            Error::CountMismatch { n, found, expected } => {
                write!(f, "found {found} {n}-Poncelet pairs, expected {expected}")
            }
            Error::MonotonicityViolation { index, t, drop } => {
                write!(f, "rotation number reverses by {drop} at sample {index} (t = {t})")
            }
            Error::RemainderBound { n, remainder } => {
                write!(f, "remainder R({n}) = {remainder} exceeds the Fibonacci bound")
            }
        }
    }
}

impl core::error::Error for Error {}
