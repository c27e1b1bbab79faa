use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    Domain { what: &'static str, value: f64 },
    /// An intermediate quantity left the representable range.
    Overflow(&'static str),
    /// All observations are equal, so shape and entropy are not identifiable.
    DegenerateSample,
    /// Too few observations for the requested computation.
    SampleTooSmall { n: usize, min: usize },
    /// A non-positive or non-finite observation.
    InvalidObservation { index: usize, value: f64 },
    NonConvergence { iterations: usize },
    InvalidConfig(&'static str),
    InsufficientLength { len: usize, min: usize },
    /// Draws have zero variance; the statistic is undefined.
    ZeroVariance,
    EmptyInput,
    /// The integral does not converge (non-integrable singularity or tail).
    Divergent(&'static str),
    /// Adaptive quadrature exhausted its budget before reaching tolerance.
    QuadratureFailure { estimate: f64, error: f64 },
}

impl Error {
    /// Stable identifier of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Overflow(_) => "overflow",
            Error::DegenerateSample => "degenerate_sample",
            Error::SampleTooSmall { .. } => "sample_too_small",
            Error::InvalidObservation { .. } => "invalid_observation",
            Error::NonConvergence { .. } => "non_convergence",
            Error::InvalidConfig(_) => "invalid_config",
            Error::InsufficientLength { .. } => "insufficient_length",
            Error::ZeroVariance => "zero_variance",
            Error::EmptyInput => "empty_input",
            Error::Divergent(_) => "divergent",
            Error::QuadratureFailure { .. } => "quadrature_failure",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::Overflow(what) => write!(f, "overflow while computing {what}"),
            Error::DegenerateSample => {
                write!(f, "degenerate sample: at least two distinct observations are required")
            }
            Error::SampleTooSmall { n, min } => {
                write!(f, "sample too small: n = {n}, need at least {min}")
            }
            Error::InvalidObservation { index, value } => {
                write!(f, "observation #{index} = {value} is not a positive finite number")
            }
            Error::NonConvergence { iterations } => {
                write!(f, "optimizer did not converge after {iterations} iterations")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::InsufficientLength { len, min } => {
                write!(f, "sequence of length {len} is too short, need at least {min}")
            }
            Error::ZeroVariance => write!(f, "draws have zero variance"),
            Error::EmptyInput => write!(f, "empty input"),
            Error::Divergent(what) => write!(f, "integral diverges: {what}"),
            Error::QuadratureFailure { estimate, error } => write!(
                f,
                "quadrature did not reach tolerance (estimate {estimate}, error {error})"
            ),
        }
    }
}

impl core::error::Error for Error {}
