use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two sequences that must be index-aligned have different lengths.
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    /// Abscissas must be strictly increasing; `index` is the first offender.
    NotIncreasing {
        index: usize,
    },
    /// A NaN or infinite value where a finite real is required.
    NonFinite,
    TooFewPoints {
        needed: usize,
        found: usize,
    },
    /// A neuron with zero inner weight cannot be placed as a knot.
    ZeroInnerWeight {
        neuron: usize,
    },
    InvalidParameter(&'static str),
    /// The exhaustive knot oracle refuses instances above its size guard.
    InstanceTooLarge {
        points: usize,
        limit: usize,
    },
    /// No interpolant with at most the given number of knots exists.
    KnotBudgetExceeded {
        max_knots: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::NotIncreasing { index } => {
                write!(f, "abscissas are not strictly increasing at index {index}")
            }
            Error::NonFinite => f.write_str("non-finite value"),
            Error::TooFewPoints { needed, found } => {
                write!(f, "at least {needed} points are required, found {found}")
            }
            Error::ZeroInnerWeight { neuron } => {
                write!(f, "neuron {neuron} has a zero inner weight")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::InstanceTooLarge { points, limit } => {
                write!(f, "instance has {points} points, oracle limit is {limit}")
            }
            Error::KnotBudgetExceeded { max_knots } => {
                write!(f, "no interpolant with at most {max_knots} knots")
            }
        }
    }
}

impl core::error::Error for Error {}
