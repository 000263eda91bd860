use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the library.
///
/// Variants split into domain errors (bad inputs, requests outside the
/// physical range) and numerical failures (solver budgets exhausted).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input that must be strictly positive was not.
    NonPositive { what: &'static str, value: f64 },
    /// An input was outside its admissible interval.
    OutOfRange { what: &'static str, value: f64 },
    /// The two states are equal or differ only by a contact jump.
    Contact,
    /// The bracket handed to the root finder has no sign change.
    NoSignChange { lo: f64, hi: f64 },
    /// Root finder iteration cap reached.
    MaxIterations { iterations: usize },
    /// No sign change found while expanding a bracket.
    BracketExpansion { what: &'static str },
    /// Adaptive integration could not continue past `s`.
    StepUnderflow { s: f64 },
    /// A quantity that must stay finite overflowed.
    NonFinite { what: &'static str },
    /// Continuation lost the curve; the last accepted sample is reported.
    CorrectorFailure { last_alpha: f64, last_t: f64 },
    /// The slope denominator of the Hugoniot locus vanished.
    VanishingDenominator { alpha: f64, t: f64 },
}

impl Error {
    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NonPositive { .. } | Error::OutOfRange { .. } | Error::Contact
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositive { what, value } => {
                write!(f, "{what} must be positive, got {value}")
            }
            Error::OutOfRange { what, value } => write!(f, "{what} out of range: {value}"),
            Error::Contact => write!(f, "states are connected by a contact discontinuity"),
            Error::NoSignChange { lo, hi } => {
                write!(f, "no sign change on bracket [{lo}, {hi}]")
            }
            Error::MaxIterations { iterations } => {
                write!(f, "root finder did not converge in {iterations} iterations")
            }
            Error::BracketExpansion { what } => write!(f, "could not bracket {what}"),
            Error::StepUnderflow { s } => write!(f, "integration step underflow at s = {s}"),
            Error::NonFinite { what } => write!(f, "{what} is not finite"),
            Error::CorrectorFailure { last_alpha, last_t } => write!(
                f,
                "continuation corrector failed after alpha = {last_alpha}, T = {last_t}"
            ),
            Error::VanishingDenominator { alpha, t } => write!(
                f,
                "Hugoniot slope denominator vanished at alpha = {alpha}, T = {t}"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositive { what, value })
    }
}
