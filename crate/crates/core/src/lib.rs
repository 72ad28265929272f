//! Decision procedures for iterated weighted Hardy-type inequalities.

pub mod conditions;
pub mod discretize;
pub mod error;
pub mod ext;
pub mod grid;
pub mod interval;
pub mod oracle;
pub mod real;
pub mod sequences;
pub mod weights;

pub use conditions::{classify, decide, CaseId, ConditionReport, ParamTriple};
pub use error::{Error, Result};
pub use ext::ExtValue;
pub use interval::Interval;
pub use oracle::{maximize_main, ratio_main, OracleOptions, OracleResult, StepFunction};
pub use real::Real;
pub use weights::quadrature::Quadrature;
pub use weights::Weight;

/// Common `f64` instantiations.
pub type Interval64 = Interval<f64>;
pub type Weight64 = Weight<f64>;
pub type Quadrature64 = Quadrature<f64>;
pub type ExtValue64 = ExtValue<f64>;
