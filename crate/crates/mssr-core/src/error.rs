//! Error type shared by every estimator in the crate.

use core::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// All failure modes of the toolkit.
///
/// Construction-time validation keeps most numeric routines infallible;
/// the variants here are the residual run-time failures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// A parameter fell outside its domain (non-positive shape, level
    /// outside (0,1) and the like).
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// A scale value sits above the smallest observed record, which the
    /// likelihood forbids.
    SupportViolation { theta: f64, min_record: f64 },
    /// Fewer records than the estimators can work with (all of them divide
    /// by log-spacings that need at least two records).
    InsufficientRecords { found: usize },
    /// A record sequence was not strictly increasing at `index`.
    NotIncreasing { index: usize },
    /// An empty data set where at least one observation is required.
    EmptyData,
    /// System size `k` above the exact-integer binomial range.
    CapacityExceeded { k: u32, max: u32 },
    /// Adaptive quadrature failed to reach the requested tolerance; the
    /// tolerance actually achieved is attached.
    QuadratureNonConvergence { achieved: f64, requested: f64 },
    /// The Taylor-approximated posterior expectation left the range where
    /// the back-transform is defined (small-sample breakdown).
    ApproximationBreakdown { value: f64 },
    /// Bootstrap spread collapsed to zero, so studentised quantities are
    /// undefined.
    DegenerateDistribution,
    /// Chain shorter than the operation needs.
    ChainTooShort { len: usize, min: usize },
    /// An empty posterior chain.
    EmptyChain,
    /// Root not bracketed inside the search interval.
    SolverBracketing { lo: f64, hi: f64 },
    /// Any other numerical failure (singular matrix, ...).
    Numerical(&'static str),
}

impl core::error::Error for Error {}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid parameter {name}={value}: {reason}"),
            Error::SupportViolation { theta, min_record } => write!(
                f,
                "scale {theta} is not below the smallest record {min_record}"
            ),
            Error::InsufficientRecords { found } => {
                write!(f, "need at least 2 records, found {found}")
            }
            Error::NotIncreasing { index } => {
                write!(f, "record sequence not strictly increasing at index {index}")
            }
            Error::EmptyData => write!(f, "empty data set"),
            Error::CapacityExceeded { k, max } => {
                write!(f, "system size k={k} exceeds the supported maximum {max}")
            }
            Error::QuadratureNonConvergence {
                achieved,
                requested,
            } => write!(
                f,
                "quadrature reached tolerance {achieved:e}, requested {requested:e}"
            ),
            Error::ApproximationBreakdown { value } => write!(
                f,
                "posterior-expectation approximation left its valid range (got {value})"
            ),
            Error::DegenerateDistribution => {
                write!(f, "bootstrap estimates are degenerate (zero spread)")
            }
            Error::ChainTooShort { len, min } => {
                write!(f, "chain of length {len} is shorter than the required {min}")
            }
            Error::EmptyChain => write!(f, "empty posterior chain"),
            Error::SolverBracketing { lo, hi } => {
                write!(f, "root not bracketed in [{lo}, {hi}]")
            }
            Error::Numerical(what) => write!(f, "numerical failure: {what}"),
        }
    }
}
