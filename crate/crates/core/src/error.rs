use core::fmt;

/// Failure modes of the pointwise and orbit computations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `ξ₁` or `ξ₂² + b²` fell inside the admissibility margin.
    Inadmissible { xi1: f64, x2: f64, xi2: f64 },
    /// The dispersion cubic does not have three distinct real roots.
    DegenerateRoots { discriminant: f64 },
    /// Energy drift stayed above tolerance after all step halvings.
    ToleranceExceeded { drift: f64, tol: f64 },
    /// The orbit did not return to its section before `t_max`.
    NoReturn { t_max: f64 },
    /// Period longer than the configured maximum, or a zero-amplitude orbit.
    NearDegenerate { period: f64 },
    /// `g > 0` on the whole circle: the orbit circulates.
    NoTurningPoints,
    /// Gauss–Legendre refinement did not converge.
    QuadratureFailure { estimate: f64, change: f64 },
    /// The requested energy level carries no closed orbit.
    NoClosedOrbit { xi1: f64, energy: f64 },
    /// Action outside the tabulated range.
    TableOutOfRange { value: f64, lo: f64, hi: f64 },
    /// No sign change of `F` over the bracketing grid.
    NoSignChange { f_lo: f64, f_hi: f64 },
    /// The scaling fit could not be formed.
    FitFailure,
    /// The energy window is not contained in a single well.
    WindowError { level: f64, barrier: f64 },
    /// A profile definition is unusable.
    InvalidProfile(&'static str),
    /// An argument is out of its documented domain.
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Inadmissible { xi1, x2, xi2 } => {
                write!(f, "inadmissible phase point (xi1={xi1}, x2={x2}, xi2={xi2})")
            }
            Error::DegenerateRoots { discriminant } => {
                write!(f, "dispersion cubic is degenerate (discriminant {discriminant:e})")
            }
            Error::ToleranceExceeded { drift, tol } => {
                write!(f, "energy drift {drift:e} exceeds tolerance {tol:e}")
            }
            Error::NoReturn { t_max } => write!(f, "no return to the section before t = {t_max}"),
            Error::NearDegenerate { period } => write!(f, "near-degenerate orbit (period {period})"),
            Error::NoTurningPoints => write!(f, "orbit circulates: no turning points"),
            Error::QuadratureFailure { estimate, change } => {
                write!(f, "quadrature did not converge (estimate {estimate}, last change {change:e})")
            }
            Error::NoClosedOrbit { xi1, energy } => {
                write!(f, "no closed orbit at xi1={xi1}, E={energy}")
            }
            Error::TableOutOfRange { value, lo, hi } => {
                write!(f, "value {value} outside table range [{lo}, {hi}]")
            }
            Error::NoSignChange { f_lo, f_hi } => {
                write!(f, "no sign change of F (endpoint values {f_lo}, {f_hi})")
            }
            Error::FitFailure => write!(f, "scaling fit failed: F is not sign-definite on the sample"),
            Error::WindowError { level, barrier } => {
                write!(f, "level {level} is not below the well barrier {barrier}")
            }
            Error::InvalidProfile(msg) => write!(f, "invalid profile: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
