//! Error type shared by every module of the crate.
//!
//! Payloads are stored as `f64` regardless of the scalar the computation ran
//! in; errors are diagnostics, not values flowing back into the numerics.

use std::fmt;

/// Everything that can go wrong while evaluating weights, sequences,
/// criteria or oracles.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A point lies outside the interval a weight is defined on.
    OutOfDomain { point: f64, lo: f64, hi: f64 },
    /// A tabulated weight was queried outside its grid hull.
    OutsideTableHull { point: f64, lo: f64, hi: f64 },
    /// A weight definition is invalid (non-positive values, bad piece layout,
    /// too few table points, ...).
    InvalidWeight { detail: String },
    /// Two weights cannot be combined symbolically (e.g. power times
    /// exponential); the caller asked for a closed form that does not exist
    /// in the representable family.
    NotRepresentable { detail: String },
    /// A root/partition search failed to bracket or converge.
    SearchFailure { detail: String },
    /// The background weight `w` violates the standing hypothesis that its
    /// tail integral is positive and finite at interior points.
    HypothesisViolation { point: f64, tail: f64 },
    /// Exponent triple outside the admissible region `p, q > 0`, `0 < r`.
    InvalidExponents { p: f64, q: f64, r: f64 },
    /// `r > 1`: the inequality only holds with trivial weights, so there is
    /// nothing to classify. Also raised by the embedding reduction when
    /// `p2 > p1`.
    TrivialWeightsRegime { r: f64 },
    /// An operation was called outside the parameter regime it is defined
    /// for (e.g. the alternative small-exponent constants).
    RegimeViolation { required: &'static str },
    /// Empty or degenerate input range / sequence.
    EmptyInput { detail: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfDomain { point, lo, hi } => {
                write!(f, "point {point} outside domain ({lo}, {hi})")
            }
            Error::OutsideTableHull { point, lo, hi } => {
                write!(f, "point {point} outside table hull [{lo}, {hi}]")
            }
            Error::InvalidWeight { detail } => write!(f, "invalid weight: {detail}"),
            Error::NotRepresentable { detail } => {
                write!(f, "no symbolic representation: {detail}")
            }
            Error::SearchFailure { detail } => write!(f, "search failure: {detail}"),
            Error::HypothesisViolation { point, tail } => write!(
                f,
                "tail integral of w at interior point {point} is {tail}; must be positive and finite"
            ),
            Error::InvalidExponents { p, q, r } => {
                write!(f, "exponents out of range: p={p}, q={q}, r={r}")
            }
            Error::TrivialWeightsRegime { r } => write!(
                f,
                "effective exponent r={r} > 1: inequality holds for trivial weights only"
            ),
            Error::RegimeViolation { required } => {
                write!(f, "operation requires parameter regime {required}")
            }
            Error::EmptyInput { detail } => write!(f, "empty input: {detail}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
