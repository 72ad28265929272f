//! Finiteness criteria for the iterated Hardy-type inequality.
//!
//! The admissible exponent triples split into seven cases; each case pairs a
//! set of continuous constants (`C1`..`C7`) with a matching pair of discrete
//! constants (`A1`..`A4`, `B1`..`B4`) evaluated on a halving ladder of the
//! background mass. The inequality holds if and only if every constant of the
//! active case is finite, and their sum estimates the best constant.

mod continuous;
mod discrete;

pub use continuous::{
    compute_c, compute_c_with, compute_h, compute_script_c, compute_script_c_with, GridOptions,
};
pub use discrete::{compute_discrete, compute_discrete_with};

use crate::discretize::DiscretizingSequence;
use crate::ext::ExtValue;
use crate::real::Real;
use crate::weights::functionals::validate_background;
use crate::weights::{Quadrature, Weight};
use crate::{Error, Result};

/// Exponent triple `(p, q, r)` of the inequality.
///
/// Admissible when `0 < p, q < ∞` and `0 < r ≤ 1`; `r > 1` is rejected with
/// the trivial-weights verdict since the inequality then forces the weights
/// to degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamTriple<R> {
    pub p: R,
    pub q: R,
    pub r: R,
}

impl<R: Real> ParamTriple<R> {
    pub fn new(p: R, q: R, r: R) -> Result<Self> {
        let t = ParamTriple { p, q, r };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: R| x.is_finite() && x > R::zero();
        if !ok(self.p) || !ok(self.q) || !ok(self.r) {
            return Err(Error::InvalidExponents {
                p: self.p.as_f64(),
                q: self.q.as_f64(),
                r: self.r.as_f64(),
            });
        }
        if self.r > R::one() {
            return Err(Error::TrivialWeightsRegime { r: self.r.as_f64() });
        }
        Ok(())
    }
}

/// The seven-way partition of admissible exponent triples.
///
/// Boundaries follow the non-strict/strict comparisons exactly as the
/// criteria are stated; no epsilon fuzz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl CaseId {
    pub fn name(self) -> &'static str {
        match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::III => "III",
            CaseId::IV => "IV",
            CaseId::V => "V",
            CaseId::VI => "VI",
            CaseId::VII => "VII",
        }
    }

    /// Continuous constants whose joint finiteness characterizes the case.
    pub fn continuous_names(self) -> &'static [ContinuousName] {
        use ContinuousName::*;
        match self {
            CaseId::I => &[C1],
            CaseId::II => &[C2],
            CaseId::III => &[C1, C3],
            CaseId::IV => &[C2, C3],
            CaseId::V => &[C4, C5],
            CaseId::VI => &[C1, C5, C6],
            CaseId::VII => &[C1, C6, C7],
        }
    }

    /// The matching discrete pair (ladder condition, cell condition).
    pub fn discrete_names(self) -> [DiscreteName; 2] {
        use DiscreteName::*;
        match self {
            CaseId::I => [A1, B1],
            CaseId::II => [A1, B2],
            CaseId::III => [A2, B1],
            CaseId::IV => [A2, B2],
            CaseId::V => [A3, B3],
            CaseId::VI => [A4, B3],
            CaseId::VII => [A4, B4],
        }
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Names of the continuous constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContinuousName {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

impl ContinuousName {
    pub fn label(self) -> &'static str {
        match self {
            ContinuousName::C1 => "C1",
            ContinuousName::C2 => "C2",
            ContinuousName::C3 => "C3",
            ContinuousName::C4 => "C4",
            ContinuousName::C5 => "C5",
            ContinuousName::C6 => "C6",
            ContinuousName::C7 => "C7",
        }
    }
}

/// Names of the alternative constants available on `0 < r ≤ q < p < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScriptName {
    C5,
    C6,
}

impl ScriptName {
    pub fn label(self) -> &'static str {
        match self {
            ScriptName::C5 => "script_C5",
            ScriptName::C6 => "script_C6",
        }
    }
}

/// Names of the discrete constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscreteName {
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
    B3,
    B4,
}

impl DiscreteName {
    pub fn label(self) -> &'static str {
        match self {
            DiscreteName::A1 => "A1",
            DiscreteName::A2 => "A2",
            DiscreteName::A3 => "A3",
            DiscreteName::A4 => "A4",
            DiscreteName::B1 => "B1",
            DiscreteName::B2 => "B2",
            DiscreteName::B3 => "B3",
            DiscreteName::B4 => "B4",
        }
    }
}

/// Sorts an admissible triple into its case.
///
/// The split is `p ≤ r` against `r < p`, then the position of `q` relative
/// to `1` and `p`; exactly one case matches.
pub fn classify<R: Real>(params: &ParamTriple<R>) -> Result<CaseId> {
    params.validate()?;
    let ParamTriple { p, q, r } = *params;
    let one = R::one();
    Ok(if p <= r {
        if q >= one {
            CaseId::I
        } else if p <= q {
            CaseId::II
        } else {
            CaseId::V
        }
    } else if p <= q {
        if q >= one {
            CaseId::III
        } else {
            CaseId::IV
        }
    } else if q >= one {
        CaseId::VII
    } else {
        CaseId::VI
    })
}

/// Everything `decide` concludes about one problem instance.
#[derive(Debug, Clone)]
pub struct ConditionReport<R> {
    pub case: CaseId,
    /// The case's continuous constants, in estimate order.
    pub continuous: Vec<(&'static str, ExtValue<R>)>,
    /// The case's discrete constants on the background ladder.
    pub discrete: Vec<(&'static str, ExtValue<R>)>,
    /// Sum of the continuous constants; estimates the best constant.
    pub estimate: ExtValue<R>,
    /// Sum of the discrete constants; the cross-check estimate.
    pub discrete_estimate: ExtValue<R>,
    /// Whether every constant of the case's criterion is finite.
    pub holds: bool,
    pub diagnostics: Vec<String>,
}

/// Ladder truncation and grid policy for `decide`.
#[derive(Debug, Clone)]
pub struct DecideOptions<R> {
    /// Lowest ladder level kept when the background mass diverges at `a`.
    pub k_min: i32,
    /// Deepest ladder level toward `b`.
    pub k_max: i32,
    pub grid: GridOptions<R>,
}

impl<R: Real> Default for DecideOptions<R> {
    fn default() -> Self {
        DecideOptions { k_min: -20, k_max: 20, grid: GridOptions::default() }
    }
}

fn sum_ext<R: Real>(parts: &[(&'static str, ExtValue<R>)]) -> ExtValue<R> {
    let mut value = R::zero();
    let mut error = R::zero();
    for (_, v) in parts {
        if v.is_infinite() {
            return ExtValue::infinite();
        }
        value = value + v.value;
        error = error + v.error;
    }
    ExtValue::finite(value, error)
}

/// Full criterion for one problem instance: classifies, evaluates the case's
/// continuous and discrete constants concurrently, and aggregates the
/// verdict.
///
/// `holds` is true exactly when every continuous constant of the case is
/// finite; `estimate` is their sum, `discrete_estimate` the ladder-side sum
/// reported for cross-checking.
pub fn decide<R: Real>(
    params: &ParamTriple<R>,
    u: &Weight<R>,
    v: &Weight<R>,
    w: &Weight<R>,
    quad: &Quadrature<R>,
    opts: &DecideOptions<R>,
) -> Result<ConditionReport<R>> {
    let case = classify(params)?;
    validate_background(w, quad)?;
    let seq = DiscretizingSequence::build(w, quad, opts.k_min, opts.k_max)?;

    let cont_names = case.continuous_names();
    let disc_names = case.discrete_names();

    let (cont_results, disc_results) = rayon::join(
        || -> Result<Vec<_>> {
            use rayon::prelude::*;
            cont_names
                .par_iter()
                .map(|&name| {
                    let (val, notes) = compute_c_with(name, params, u, v, w, quad, &opts.grid)?;
                    Ok((name.label(), val, notes))
                })
                .collect()
        },
        || -> Result<Vec<_>> {
            use rayon::prelude::*;
            disc_names
                .par_iter()
                .map(|&name| {
                    let (val, notes) = compute_discrete_with(name, params, u, v, w, &seq, quad)?;
                    Ok((name.label(), val, notes))
                })
                .collect()
        },
    );
    let cont_results = cont_results?;
    let disc_results = disc_results?;

    let mut diagnostics = Vec::new();
    let mut continuous = Vec::new();
    for (label, val, notes) in cont_results {
        for n in notes {
            diagnostics.push(format!("{label}: {n}"));
        }
        continuous.push((label, val));
    }
    let mut discrete = Vec::new();
    for (label, val, notes) in disc_results {
        for n in notes {
            diagnostics.push(format!("{label}: {n}"));
        }
        discrete.push((label, val));
    }

    let estimate = sum_ext(&continuous);
    let discrete_estimate = sum_ext(&discrete);
    let holds = estimate.is_finite();
    Ok(ConditionReport {
        case,
        continuous,
        discrete,
        estimate,
        discrete_estimate,
        holds,
        diagnostics,
    })
}
