//! Equivalences for strongly monotone sequences and regular kernels.
//!
//! A strongly monotone ladder exchanges partial sums and suprema against its
//! diagonal, with constants depending only on the power and the ratio bound;
//! a two-index kernel that is monotone in each slot and quasi-subadditive
//! collapses to its first off-diagonal. Both sides of every identity are
//! evaluated verbatim so tests can pin the trivial directions exactly and
//! bound the reverse ones.

use crate::real::Real;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqKind {
    StronglyDecreasing,
    StronglyIncreasing,
    General,
}

/// A finite positive sequence with its consecutive-ratio classification.
#[derive(Debug, Clone)]
pub struct SequenceSample<R> {
    values: Vec<R>,
    kind: SeqKind,
    /// Sup of `a_{k+1}/a_k` for decreasing samples, inf for increasing ones.
    ratio_bound: R,
}

impl<R: Real> SequenceSample<R> {
    pub fn new(values: Vec<R>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput { detail: "sequence sample" });
        }
        if values.iter().any(|v| !(*v > R::zero() && v.is_finite())) {
            return Err(Error::InvalidWeight {
                detail: "sequence samples must be positive and finite".into(),
            });
        }
        let mut sup_ratio = R::zero();
        let mut inf_ratio = R::infinity();
        for pair in values.windows(2) {
            let r = pair[1] / pair[0];
            sup_ratio = sup_ratio.max(r);
            inf_ratio = inf_ratio.min(r);
        }
        let (kind, ratio_bound) = if values.len() == 1 {
            (SeqKind::General, R::one())
        } else if sup_ratio < R::one() {
            (SeqKind::StronglyDecreasing, sup_ratio)
        } else if inf_ratio > R::one() {
            (SeqKind::StronglyIncreasing, inf_ratio)
        } else {
            (SeqKind::General, R::one())
        };
        Ok(SequenceSample { values, kind, ratio_bound })
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn kind(&self) -> SeqKind {
        self.kind
    }

    pub fn ratio_bound(&self) -> R {
        self.ratio_bound
    }
}

/// The seven diagonal-exchange identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivId {
    DecSumSum,
    DecSumSup,
    DecSupSum,
    IncSupSup,
    IncSumSum,
    IncSupSum,
    IncSumSup,
}

impl EquivId {
    pub const ALL: [EquivId; 7] = [
        EquivId::DecSumSum,
        EquivId::DecSumSup,
        EquivId::DecSupSum,
        EquivId::IncSupSup,
        EquivId::IncSumSum,
        EquivId::IncSupSum,
        EquivId::IncSumSup,
    ];

    pub fn needs(self) -> SeqKind {
        match self {
            EquivId::DecSumSum | EquivId::DecSumSup | EquivId::DecSupSum => {
                SeqKind::StronglyDecreasing
            }
            _ => SeqKind::StronglyIncreasing,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EquivId::DecSumSum => "dec-sum-sum",
            EquivId::DecSumSup => "dec-sum-sup",
            EquivId::DecSupSum => "dec-sup-sum",
            EquivId::IncSupSup => "inc-sup-sup",
            EquivId::IncSumSum => "inc-sum-sum",
            EquivId::IncSupSum => "inc-sup-sum",
            EquivId::IncSumSup => "inc-sum-sup",
        }
    }
}

/// `lhs` aggregates the cumulative form, `rhs` the diagonal form; the
/// inequality `rhs ≤ lhs` is term-by-term exact, the reverse holds within
/// [`reverse_bound`].
#[derive(Debug, Clone, Copy)]
pub struct EquivOutcome<R> {
    pub id: EquivId,
    pub lhs: R,
    pub rhs: R,
}

/// Evaluates one identity on `(a, b)` with power `alpha`.
pub fn equivalence_eval<R: Real>(
    id: EquivId,
    a: &[R],
    b: &[R],
    alpha: R,
) -> EquivOutcome<R> {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    let pow = |x: R| x.powf(alpha);
    let mut lhs = R::zero();
    let mut rhs = R::zero();
    match id {
        EquivId::DecSumSum | EquivId::DecSumSup | EquivId::DecSupSum => {
            let mut acc = R::zero();
            let mut run = R::zero();
            for k in 0..n {
                acc = acc + b[k];
                run = run.max(b[k]);
                let cum = if id == EquivId::DecSumSup { run } else { acc };
                let (l, r) = (a[k] * pow(cum), a[k] * pow(b[k]));
                if id == EquivId::DecSupSum {
                    lhs = lhs.max(l);
                    rhs = rhs.max(r);
                } else {
                    lhs = lhs + l;
                    rhs = rhs + r;
                }
            }
        }
        EquivId::IncSupSup | EquivId::IncSumSum | EquivId::IncSupSum | EquivId::IncSumSup => {
            let mut acc = R::zero();
            let mut run = R::zero();
            for k in (0..n).rev() {
                acc = acc + b[k];
                run = run.max(b[k]);
                let cum = if id == EquivId::IncSumSum || id == EquivId::IncSupSum {
                    acc
                } else {
                    run
                };
                let (l, r) = (a[k] * pow(cum), a[k] * pow(b[k]));
                if id == EquivId::IncSupSup || id == EquivId::IncSupSum {
                    lhs = lhs.max(l);
                    rhs = rhs.max(r);
                } else {
                    lhs = lhs + l;
                    rhs = rhs + r;
                }
            }
        }
    }
    EquivOutcome { id, lhs, rhs }
}

/// Evaluates every identity applicable to the sample's kind.
// `!(alpha > 0)` also rejects NaN, which `alpha <= 0` would let through.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn sequence_equiv_suite<R: Real>(
    sample: &SequenceSample<R>,
    b: &[R],
    alpha: R,
) -> Result<Vec<EquivOutcome<R>>> {
    if b.len() != sample.values().len() {
        return Err(Error::EmptyInput { detail: "mismatched sequence lengths" });
    }
    if !(alpha > R::zero()) {
        return Err(Error::InvalidExponents {
            p: f64::NAN,
            q: f64::NAN,
            r: alpha.as_f64(),
        });
    }
    Ok(EquivId::ALL
        .iter()
        .filter(|id| id.needs() == sample.kind())
        .map(|&id| equivalence_eval(id, sample.values(), b, alpha))
        .collect())
}

/// Proven bound on `lhs/rhs` for the reverse (non-trivial) direction, as a
/// function of the power and the consecutive-ratio bound. Follows from
/// splitting the cumulative geometrically (Hölder against the ratio ladder
/// for powers above 1).
pub fn reverse_bound<R: Real>(id: EquivId, alpha: R, ratio_bound: R) -> R {
    let one = R::one();
    // Distance-from-1 parameter on the relevant side.
    let delta = match id.needs() {
        SeqKind::StronglyDecreasing => ratio_bound,
        _ => ratio_bound.recip(),
    };
    debug_assert!(delta < one);
    let sum_bound = if alpha <= one {
        (one - delta).recip()
    } else {
        (one - delta.powf(alpha.recip())).powf(-alpha)
    };
    match id {
        EquivId::IncSupSup => one,
        EquivId::DecSumSup | EquivId::IncSumSup => (one - delta).recip(),
        EquivId::DecSupSum | EquivId::IncSupSum => {
            (one - delta.powf(alpha.recip())).powf(-alpha)
        }
        EquivId::DecSumSum | EquivId::IncSumSum => sum_bound,
    }
}

/// Both sides of the two kernel-collapse identities plus the measured
/// quasi-subadditivity constant of the kernel.
#[derive(Debug, Clone, Copy)]
pub struct KernelCheck<R> {
    pub kersup: EquivOutcome<R>,
    pub kersum: EquivOutcome<R>,
    /// Measured sup of `d(k,i) / (d(k,j) + d(j,i))` over `k ≤ j ≤ i`.
    pub kappa_witness: R,
}

/// Evaluates the kernel-collapse identities
/// `agg_k a_k (Σ_{i≥k} d(k,i+1) b_i)^β  vs  agg_k a_k d(k,k+1)^β (Σ_{i≥k} b_i)^β`
/// for `agg ∈ {sup, Σ}`, after validating the kernel's monotonicity.
///
/// `d(k, i)` must be defined for `0 ≤ k ≤ i ≤ n` where `n = a.len()`.
// The index `i` feeds the kernel callback alongside `b[i]`.
#[allow(clippy::needless_range_loop)]
pub fn regular_kernel_check<R: Real>(
    d: &dyn Fn(usize, usize) -> R,
    a: &SequenceSample<R>,
    b: &[R],
    beta: R,
) -> Result<KernelCheck<R>> {
    let n = a.values().len();
    if b.len() != n {
        return Err(Error::EmptyInput { detail: "mismatched kernel sequence lengths" });
    }
    if a.kind() != SeqKind::StronglyIncreasing {
        return Err(Error::RegimeViolation { required: "strongly increasing coefficient sequence" });
    }
    if beta < R::zero() {
        return Err(Error::InvalidExponents {
            p: f64::NAN,
            q: f64::NAN,
            r: beta.as_f64(),
        });
    }
    // Monotone in each slot: non-increasing in k, non-decreasing in i.
    for k in 0..n {
        for i in k..=n {
            if k < i && d(k + 1, i) > d(k, i) {
                return Err(Error::SearchFailure {
                    detail: format!("kernel grows in the first index at ({}, {})", k + 1, i),
                });
            }
            if i < n && d(k, i + 1) < d(k, i) {
                return Err(Error::SearchFailure {
                    detail: format!("kernel shrinks in the second index at ({}, {})", k, i + 1),
                });
            }
        }
    }
    let mut kappa = R::zero();
    for k in 0..=n {
        for j in k..=n {
            for i in j..=n {
                let whole = d(k, i);
                let parts = d(k, j) + d(j, i);
                if parts > R::zero() {
                    kappa = kappa.max(whole / parts);
                } else if whole > R::zero() {
                    return Err(Error::SearchFailure {
                        detail: format!(
                            "kernel breaks quasi-subadditivity with zero parts at ({}, {}, {})",
                            k, j, i
                        ),
                    });
                }
            }
        }
    }

    let av = a.values();
    let pow = |x: R| x.powf(beta);
    let mut sup_lhs = R::zero();
    let mut sup_rhs = R::zero();
    let mut sum_lhs = R::zero();
    let mut sum_rhs = R::zero();
    for k in 0..n {
        let mut kernel_sum = R::zero();
        let mut plain_sum = R::zero();
        for i in k..n {
            kernel_sum = kernel_sum + d(k, i + 1) * b[i];
            plain_sum = plain_sum + b[i];
        }
        let l = av[k] * pow(kernel_sum);
        let r = av[k] * pow(d(k, k + 1)) * pow(plain_sum);
        sup_lhs = sup_lhs.max(l);
        sup_rhs = sup_rhs.max(r);
        sum_lhs = sum_lhs + l;
        sum_rhs = sum_rhs + r;
    }
    Ok(KernelCheck {
        kersup: EquivOutcome { id: EquivId::IncSupSum, lhs: sup_lhs, rhs: sup_rhs },
        kersum: EquivOutcome { id: EquivId::IncSumSum, lhs: sum_lhs, rhs: sum_rhs },
        kappa_witness: kappa,
    })
}
