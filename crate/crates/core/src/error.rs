use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Domain errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A 2x2 or 4x4 matrix expected to be unitary failed the check.
    NonUnitary { deviation: f64 },
    /// Truncating an infinite expansion discarded more norm than allowed.
    TruncationExceeded { loss: f64, limit: f64, cutoff: u32 },
    /// Quasi-NOON occupations are not (close to) integers.
    NonIntegerOccupation { plus: f64, minus: f64 },
    /// The Poissonian cat construction needs `var >= n_mean`.
    VarianceTooSmall { var: f64, n_mean: f64 },
    /// Fisher information is zero, the Cramer-Rao uncertainty is unbounded.
    ZeroInformation,
    /// A variance-plane abscissa lies outside the arc between the corners.
    OutOfArc { xi: f64, half_width: f64 },
    /// The parabolic boundary degenerates when the number variance vanishes.
    ZeroVariance,
    /// Covariance matrix could not be inverted.
    SingularCovariance,
    /// The constrained sampler could not reach a feasible point.
    InfeasibleGrid { grid_max: u32, residual: f64 },
    /// An argument lies outside the documented domain.
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonUnitary { deviation } => {
                write!(f, "matrix is not unitary (deviation {deviation:e})")
            }
            Error::TruncationExceeded { loss, limit, cutoff } => write!(
                f,
                "truncation at cutoff {cutoff} discards norm {loss:e} (limit {limit:e})"
            ),
            Error::NonIntegerOccupation { plus, minus } => write!(
                f,
                "quasi-NOON occupations ({plus}, {minus}) are not integers; adjust the budget or use rounded mode"
            ),
            Error::VarianceTooSmall { var, n_mean } => write!(
                f,
                "Poissonian cat needs variance >= mean (got var {var}, mean {n_mean})"
            ),
            Error::ZeroInformation => {
                f.write_str("Fisher information is zero: the uncertainty is unbounded")
            }
            Error::OutOfArc { xi, half_width } => {
                write!(f, "xi = {xi} is outside [-{half_width}, {half_width}]")
            }
            Error::ZeroVariance => f.write_str("number variance must be positive"),
            Error::SingularCovariance => f.write_str("covariance matrix is singular"),
            Error::InfeasibleGrid { grid_max, residual } => write!(
                f,
                "no feasible distribution found on grid {grid_max} (residual {residual:e})"
            ),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
