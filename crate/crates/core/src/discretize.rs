//! Dyadic discretization of the background tail `𝒲(x) = ∫_x^b w`.
//!
//! The points `x_k` solve `𝒲(x_k) = 2^{-k} 𝒲₀` and turn integrals and
//! suprema against `w` into sums and suprema over a geometric ladder. The
//! equivalence checks at the bottom are the numeric forms of that exchange,
//! with their exact two-sided constants.

use crate::ext::{xdiv, ExtValue};
use crate::grid::{stretch, sup_refine, SupOptions};
use crate::real::Real;
use crate::weights::functionals::validate_background;
use crate::weights::quadrature::integrate_fn;
use crate::weights::{Quadrature, Weight};
use crate::{Error, Result};

/// Relative tolerance on 𝒲-values for the point solves. The invariant lives
/// on 𝒲(x_k), not on the abscissae.
const SOLVE_TOL: f64 = 1e-12;

/// Points `x_k` with `𝒲(x_k) = 2^{-k} 𝒲₀`, solved to [`SOLVE_TOL`].
///
/// For a bounded interval the solve runs in the offset variable
/// `δ = b - x` against the mirrored weight: float spacing near `b` would
/// otherwise quantize `𝒲` at a relative error far above [`SOLVE_TOL`] once
/// `𝒲(x_k)` is many octaves below `𝒲₀`.
pub struct DiscretizingSequence<R> {
    w: Weight<R>,
    /// Mirror of `w` when the domain is bounded.
    mirror: Option<Weight<R>>,
    points: Vec<R>,
    /// `b - x_k` for bounded domains, full precision.
    deltas: Option<Vec<R>>,
    /// 𝒲 actually achieved at each solved point.
    achieved: Vec<R>,
    k_lo: i32,
    k_hi: i32,
    /// `Some(0)` when `𝒲(a) < ∞` (then `x_0 = a`); `None` flags the
    /// sequence extending conceptually to `k → -∞`, truncated at `k_lo`.
    n: Option<i32>,
    w0: R,
}

impl<R: Real> DiscretizingSequence<R> {
    /// Solves the ladder for `k ∈ [k_min, k_max] ∩ [N, ∞)`.
    // `!(x < y)` also trips on NaN abscissae, which `x >= y` would miss.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn build(w: &Weight<R>, quad: &Quadrature<R>, k_min: i32, k_max: i32) -> Result<Self> {
        if k_min > k_max {
            return Err(Error::EmptyInput { detail: "discretizing index range" });
        }
        validate_background(w, quad)?;
        let (a, b) = (w.domain().lo(), w.domain().hi());
        let mirror = if b.is_finite() { Some(w.mirrored()?) } else { None };
        let total = w.integral(a, b, quad)?;

        let (w0, n, k_lo) = if total.is_finite() {
            (total.value, Some(0), k_min.max(0))
        } else {
            // Reference level at an interior point; k walks negative toward a.
            let x_ref = if b.is_finite() { (a + b) * R::of(0.5) } else { a + R::one() };
            let w_ref = w.integral(x_ref, b, quad)?;
            if !w_ref.is_finite() {
                return Err(Error::HypothesisViolation {
                    point: x_ref.as_f64(),
                    tail: f64::INFINITY,
                });
            }
            (w_ref.value, None, k_min)
        };

        let mut points = Vec::with_capacity((k_max - k_lo + 1) as usize);
        let mut deltas = mirror.as_ref().map(|_| Vec::with_capacity((k_max - k_lo + 1) as usize));
        let mut achieved = Vec::with_capacity((k_max - k_lo + 1) as usize);
        for k in k_lo..=k_max {
            if n == Some(0) && k == 0 {
                points.push(a);
                if let Some(d) = deltas.as_mut() {
                    d.push(b - a);
                }
                achieved.push(w0);
                continue;
            }
            let target = pow2k::<R>(-k) * w0;
            match &mirror {
                Some(m) => {
                    // 𝒲(b - δ) = ∫_0^δ m, increasing in δ.
                    let span = b - a;
                    let head = |d: R| m.integral(R::zero(), d, quad).map(|v| v.value);
                    let delta = solve_monotone(&head, span, target, true)?;
                    points.push(b - delta);
                    if let Some(ds) = deltas.as_mut() {
                        ds.push(delta);
                    }
                    achieved.push(head(delta)?);
                }
                None => {
                    // Compactified abscissa; 𝒲 decreasing in s.
                    let tail = |s: R| {
                        let t = stretch(a, b, s);
                        w.integral(t, b, quad).map(|v| v.value)
                    };
                    let s = solve_monotone(&tail, R::one(), target, false)?;
                    points.push(stretch(a, b, s));
                    achieved.push(tail(s)?);
                }
            }
        }
        for pair in points.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::SearchFailure {
                    detail: format!(
                        "discretizing points collapse near {} (index range too deep for the scalar type)",
                        pair[1]
                    ),
                });
            }
        }
        Ok(DiscretizingSequence {
            w: w.clone(),
            mirror,
            points,
            deltas,
            achieved,
            k_lo,
            k_hi: k_max,
            n,
            w0,
        })
    }

    pub fn k_lo(&self) -> i32 {
        self.k_lo
    }

    pub fn k_hi(&self) -> i32 {
        self.k_hi
    }

    /// `Some(0)` when the ladder starts at the left endpoint, `None` when it
    /// extends to `k → -∞` and is truncated at `k_lo`.
    pub fn start_index(&self) -> Option<i32> {
        self.n
    }

    /// The normalization `𝒲₀` (tail mass at the `k = 0` point).
    pub fn w0(&self) -> R {
        self.w0
    }

    /// 𝒲 at the deepest solved point, i.e. the truncated tail.
    pub fn tail_mass(&self) -> R {
        pow2k::<R>(-self.k_hi) * self.w0
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn x(&self, k: i32) -> R {
        self.points[self.idx(k)]
    }

    pub fn points(&self) -> &[R] {
        &self.points
    }

    /// Prescribed level `2^{-k} 𝒲₀`.
    pub fn w_target(&self, k: i32) -> R {
        pow2k::<R>(-k) * self.w0
    }

    /// 𝒲 actually achieved at the solved point, full tail precision.
    pub fn w_achieved(&self, k: i32) -> R {
        self.achieved[self.idx(k)]
    }

    /// `𝒲(x_k) · 2^k / 𝒲₀ - 1`, the ladder defect.
    pub fn residual(&self, k: i32) -> R {
        self.w_achieved(k) / self.w_target(k) - R::one()
    }

    /// `1 / 𝒲(x_k)`; the natural scale of level-k terms in the discrete
    /// constants (reduces to `2^k` when `𝒲₀ = 1`).
    pub fn kappa(&self, k: i32) -> R {
        self.w_target(k).recip()
    }

    /// `x_k - x_{k-1}`, from the offset representation when available.
    pub fn gap(&self, k: i32) -> R {
        match &self.deltas {
            Some(d) => d[self.idx(k - 1)] - d[self.idx(k)],
            None => self.x(k) - self.x(k - 1),
        }
    }

    /// `∫_{x_{j}}^{x_k} w` for ladder indices `j ≤ k`, cancellation-free.
    pub fn cell_w_mass(&self, j: i32, k: i32) -> R {
        (pow2k::<R>(-j) - pow2k::<R>(-k)) * self.w0
    }

    fn idx(&self, k: i32) -> usize {
        debug_assert!(k >= self.k_lo && k <= self.k_hi);
        (k - self.k_lo) as usize
    }
}

fn pow2k<R: Real>(k: i32) -> R {
    R::of(2.0).powi(k)
}

/// Solves `g(x) = target` for monotone `g` on `(0, span)` by bisection,
/// stopping on the relative value defect. `increasing` states the direction
/// of `g`.
fn solve_monotone<R: Real>(
    g: &dyn Fn(R) -> Result<R>,
    span: R,
    target: R,
    increasing: bool,
) -> Result<R> {
    let tol = R::of(SOLVE_TOL);
    let mut lo = R::zero();
    let mut hi = span;
    for _ in 0..4096 {
        let mid = (lo + hi) * R::of(0.5);
        if mid <= lo || mid >= hi {
            // Interval exhausted at scalar resolution; accept the better end.
            break;
        }
        let v = g(mid)?;
        if v.is_finite() && (v / target - R::one()).abs() <= tol {
            return Ok(mid);
        }
        let go_right = if increasing { v < target } else { v > target };
        if go_right {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Exhausted bracket: re-check both ends for an acceptable defect. The
    // looser bound below covers targets whose pre-image falls between two
    // adjacent floats.
    let loose = R::of(1e-8);
    let mut best = lo;
    let mut best_defect = R::infinity();
    for cand in [lo, hi] {
        if cand > R::zero() && cand < span {
            let v = g(cand)?;
            let defect = (v / target - R::one()).abs();
            if defect < best_defect {
                best_defect = defect;
                best = cand;
            }
        }
    }
    if best_defect <= loose {
        return Ok(best);
    }
    Err(Error::SearchFailure {
        detail: format!(
            "bisection stalled at relative defect {} for level target {}",
            best_defect, target
        ),
    })
}

/// Both sides of one ladder equivalence, with their quotient.
pub struct EquivCheck<R> {
    pub lhs: R,
    pub rhs: R,
    pub ratio: R,
}

/// Integral-to-sum exchange for non-decreasing `h`:
/// `∫_{x_n}^b 𝒲^{β-1} w h  vs  Σ_{k>n} 𝒲(x_k)^β h(x_k)`,
/// both truncated at the ladder depth. The quotient provably lies in
/// `[(1-2^{-β})/β, (2^β-1)/β]` up to the truncated tail.
// `!(beta > 0)` also rejects NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check_int_sup_equiv<R: Real>(
    w: &Weight<R>,
    h: &dyn Fn(R) -> R,
    beta: R,
    seq: &DiscretizingSequence<R>,
    n: i32,
    quad: &Quadrature<R>,
) -> Result<EquivCheck<R>> {
    if !(beta > R::zero()) {
        return Err(Error::InvalidExponents { p: f64::NAN, q: f64::NAN, r: beta.as_f64() });
    }
    let b = w.domain().hi();
    let mut lhs = R::zero();
    // Cellwise so the quadrature only meets smooth factors; 𝒲 on the cell
    // (x_{k-1}, x_k) stays within a factor 2, keeping 𝒲^{β-1} tame.
    for k in (n + 1)..=seq.k_hi() {
        let (xl, xr) = (seq.x(k - 1), seq.x(k));
        let f = |t: R| {
            let tail = w.integral(t, b, quad).map(|v| v.value).unwrap_or(R::nan());
            tail.powf(beta - R::one()) * w.eval(t).unwrap_or(R::nan()) * h(t)
        };
        let mut cuts = vec![xl];
        cuts.extend(w.junctions().into_iter().filter(|&t| t > xl && t < xr));
        cuts.push(xr);
        for seg in cuts.windows(2) {
            lhs = lhs + integrate_fn(&f, seg[0], seg[1], quad)?.value;
        }
    }
    let mut rhs = R::zero();
    for k in (n + 1)..=seq.k_hi() {
        rhs = rhs + seq.w_target(k).powf(beta) * h(seq.x(k));
    }
    Ok(EquivCheck { lhs, rhs, ratio: xdiv(lhs, rhs) })
}

/// Sup-to-sup exchange for non-increasing `h`:
/// `sup_{x < x_m} 𝒲(x)^{-β} h(x)  vs  max_{k ≤ m} 𝒲(x_k)^{-β} h(x_{k-1})`.
/// The quotient provably lies in `[2^{-β}, 1]`.
// `!(beta > 0)` also rejects NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check_neg_sup_equiv<R: Real>(
    w: &Weight<R>,
    h: &dyn Fn(R) -> R,
    beta: R,
    seq: &DiscretizingSequence<R>,
    m: i32,
    quad: &Quadrature<R>,
) -> Result<EquivCheck<R>> {
    if !(beta > R::zero()) {
        return Err(Error::InvalidExponents { p: f64::NAN, q: f64::NAN, r: beta.as_f64() });
    }
    let a = w.domain().lo();
    let b = w.domain().hi();
    let f = |x: R| -> Result<R> {
        let tail = w.integral(x, b, quad)?;
        if tail.is_infinite() {
            return Ok(R::zero());
        }
        Ok(tail.value.powf(-beta) * h(x))
    };
    let pins: Vec<R> = seq.points().to_vec();
    let sup = sup_refine(&f, a, seq.x(m), &pins, &SupOptions {
        rel_stop: R::of(1e-9),
        ..SupOptions::default()
    })?;
    let lhs = if sup.is_infinite() { R::infinity() } else { sup.value };

    let mut rhs = R::zero();
    for k in (seq.k_lo() + 1)..=m {
        rhs = rhs.max(seq.w_target(k).powf(-beta) * h(seq.x(k - 1)));
    }
    Ok(EquivCheck { lhs, rhs, ratio: xdiv(lhs, rhs) })
}

/// Exact enclosure of `lhs/rhs` for [`check_int_sup_equiv`].
pub fn int_sup_ratio_bounds<R: Real>(beta: R) -> (R, R) {
    let two = R::of(2.0);
    (
        (R::one() - two.powf(-beta)) / beta,
        (two.powf(beta) - R::one()) / beta,
    )
}

/// Exact enclosure of `lhs/rhs` for [`check_neg_sup_equiv`].
pub fn neg_sup_ratio_bounds<R: Real>(beta: R) -> (R, R) {
    (R::of(2.0).powf(-beta), R::one())
}

/// Read access for downstream modules working per ladder cell.
impl<R: Real> DiscretizingSequence<R> {
    /// The underlying weight.
    pub fn weight(&self) -> &Weight<R> {
        &self.w
    }

    /// Mirrored weight for bounded domains.
    pub fn mirror(&self) -> Option<&Weight<R>> {
        self.mirror.as_ref()
    }

    /// Evaluates `ExtValue`-style 𝒲 at an arbitrary point.
    pub fn w_tail_at(&self, x: R, quad: &Quadrature<R>) -> Result<ExtValue<R>> {
        self.w.integral(x, self.w.domain().hi(), quad)
    }
}
