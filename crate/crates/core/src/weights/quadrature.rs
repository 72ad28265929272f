//! Quadrature options and the adaptive integration engine.
//!
//! The engine integrates arbitrary positive integrands over `(x, y)` with
//! `y = ∞` allowed. Panels cluster geometrically toward both endpoints so
//! integrable power singularities converge, and the refinement trend doubles
//! as the divergence detector: a non-integrable endpoint keeps inflating the
//! value as depth grows.

use crate::error::{Error, Result};
use crate::ext::ExtValue;
use crate::real::Real;

/// Tolerances and budget of every numerical integration in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<R> {
    /// Relative stopping tolerance between successive refinements.
    pub rel_tol: R,
    /// Absolute floor below which refinement differences are ignored.
    pub abs_tol: R,
    /// Hard budget on integrand evaluations per integral.
    pub max_panels: usize,
    /// Values above this are declared `+∞`.
    pub divergence_threshold: R,
}

impl<R: Real> Default for Quadrature<R> {
    fn default() -> Self {
        let eps = R::epsilon();
        Quadrature {
            rel_tol: R::of(1e-10).max(eps * R::of(64.0)),
            abs_tol: R::of(1e-14).max(eps * R::of(1e-3)),
            max_panels: 1 << 17,
            divergence_threshold: R::of(1e12),
        }
    }
}

impl<R: Real> Quadrature<R> {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > R::zero()
            && self.abs_tol > R::zero()
            && self.max_panels > 0
            && self.divergence_threshold > self.rel_tol.recip();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidWeight {
                detail: format!(
                    "invalid quadrature options: rel_tol={}, abs_tol={}, max_panels={}, divergence_threshold={}",
                    self.rel_tol, self.abs_tol, self.max_panels, self.divergence_threshold
                ),
            })
        }
    }

    /// Same options with a different relative tolerance.
    pub fn with_rel_tol(mut self, rel_tol: R) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// 10-point Gauss-Legendre nodes (positive half) and weights on `[-1, 1]`.
const GAUSS_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
// Tabulated at source precision.
#[allow(clippy::excessive_precision)]
const GAUSS_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

/// Gauss-Legendre 10-point rule on a single finite panel `[c, d]`.
pub fn gauss_panel<R: Real>(f: &dyn Fn(R) -> R, c: R, d: R) -> R {
    let half = (d - c) * R::of(0.5);
    let mid = (c + d) * R::of(0.5);
    let mut acc = R::zero();
    for i in 0..5 {
        let dx = half * R::of(GAUSS_X[i]);
        let w = R::of(GAUSS_W[i]);
        acc = acc + w * (f(mid - dx) + f(mid + dx));
    }
    acc * half
}

/// Breakpoints of the unit interval for one refinement level: geometric
/// ladders of depth `geo` toward 0 and 1 plus a uniform grid of `2^uni`
/// cells. Returned sorted, including 0 and 1.
pub fn unit_breaks<R: Real>(geo: u32, uni: u32) -> Vec<R> {
    let mut s: Vec<R> = Vec::with_capacity((2 * geo + (1 << uni) + 2) as usize);
    s.push(R::zero());
    for j in (1..=geo).rev() {
        s.push(pow2_neg::<R>(j));
    }
    let n = 1usize << uni;
    for i in 1..n {
        s.push(R::of(i as f64) / R::of(n as f64));
    }
    for j in 1..=geo {
        s.push(R::one() - pow2_neg::<R>(j));
    }
    s.push(R::one());
    s.sort_by(|a, b| a.partial_cmp(b).expect("breakpoints must not be NaN"));
    s.dedup_by(|a, b| *a == *b);
    s
}

fn pow2_neg<R: Real>(j: u32) -> R {
    R::of(2.0).powi(-(j as i32))
}

/// Maps `s ∈ [0, 1]` onto `[x, y]`; for `y = ∞` uses `t = x + s/(1-s)`.
fn map_point<R: Real>(x: R, y: R, s: R) -> R {
    if y.is_infinite() {
        if s >= R::one() { R::infinity() } else { x + s / (R::one() - s) }
    } else {
        x + (y - x) * s
    }
}

/// Jacobian `dt/ds` of [`map_point`].
fn map_jacobian<R: Real>(x: R, y: R, s: R) -> R {
    if y.is_infinite() {
        let d = R::one() - s;
        (d * d).recip()
    } else {
        y - x
    }
}

/// Adaptive integral of `f` over `(x, y)`.
///
/// Returns an extended value: analytic blow-ups at the endpoints surface as
/// `+∞` through the refinement-growth rule (partial value growing by a
/// factor > 1.5 on three consecutive refinements) or by exceeding
/// `divergence_threshold`. Fails with [`Error::SearchFailure`] if the panel
/// budget is exhausted before the refinement stabilizes.
pub fn integrate_fn<R: Real>(
    f: &dyn Fn(R) -> R,
    x: R,
    y: R,
    quad: &Quadrature<R>,
) -> Result<ExtValue<R>> {
    if x == y {
        return Ok(ExtValue::exact(R::zero()));
    }
    debug_assert!(x < y);
    let g = |s: R| {
        let t = map_point(x, y, s);
        let v = f(t) * map_jacobian(x, y, s);
        if v.is_finite() {
            return v;
        }
        // At deep refinement a node can round exactly onto an endpoint
        // singularity; resample a few ulps toward the interior so a poisoned
        // node does not masquerade as divergence.
        let mid = map_point(x, y, R::of(0.5));
        let t2 = t + (mid - t) * R::epsilon() * R::of(4.0);
        f(t2) * map_jacobian(x, y, s)
    };

    let mut prev: Option<R> = None;
    let mut growth_streak = 0u32;
    let mut panels_used = 0usize;
    for level in 0u32.. {
        let geo = 8 + 6 * level;
        let uni = (3 + level).min(9);
        let breaks = unit_breaks::<R>(geo, uni);
        panels_used += (breaks.len() - 1) * 10;
        if panels_used > quad.max_panels {
            return Err(Error::SearchFailure {
                detail: format!(
                    "quadrature did not converge within {} panel evaluations on ({}, {})",
                    quad.max_panels, x, y
                ),
            });
        }
        let mut value = R::zero();
        for w in breaks.windows(2) {
            value = value + gauss_panel(&g, w[0], w[1]);
        }
        if !value.is_finite() || value > quad.divergence_threshold {
            return Ok(ExtValue::infinite());
        }
        if let Some(p) = prev {
            let delta = (value - p).abs();
            if delta <= quad.rel_tol * value.abs() + quad.abs_tol {
                return Ok(ExtValue::finite(value, delta));
            }
            if value.abs() > R::of(1.5) * p.abs() && p.abs() > quad.abs_tol {
                growth_streak += 1;
                if growth_streak >= 3 {
                    return Ok(ExtValue::infinite());
                }
            } else {
                growth_streak = 0;
            }
        }
        prev = Some(value);
    }
    unreachable!()
}
