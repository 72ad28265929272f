//! Scalar functionals of weights: tail masses and the local norm
//! `V_r(x, y)`.

use crate::error::{Error, Result};
use crate::ext::{xpow, ExtValue};
use crate::real::Real;
use crate::weights::quadrature::Quadrature;
use crate::weights::Weight;

/// `𝒲(x) = ∫_x^b w`, the tail mass of the background weight.
pub fn tail_mass<R: Real>(w: &Weight<R>, x: R, quad: &Quadrature<R>) -> Result<ExtValue<R>> {
    w.integral(x, w.domain().hi(), quad)
}

/// Checks the standing hypothesis `0 < ∫_x^b w < ∞` at interior probe
/// points; a violation is a distinct, reportable error.
pub fn validate_background<R: Real>(w: &Weight<R>, quad: &Quadrature<R>) -> Result<()> {
    let dom = w.domain();
    let probes: [R; 3] = if dom.is_unbounded() {
        [
            dom.lo() + R::of(1.0 / 3.0),
            dom.lo() + R::one(),
            dom.lo() + R::of(3.0),
        ]
    } else {
        let len = dom.hi() - dom.lo();
        [
            dom.lo() + len * R::of(0.25),
            dom.lo() + len * R::of(0.5),
            dom.lo() + len * R::of(0.75),
        ]
    };
    for x in probes {
        let tail = tail_mass(w, x, quad)?;
        if tail.is_infinite() || tail.value <= R::zero() {
            return Err(Error::HypothesisViolation {
                point: x.as_f64(),
                tail: tail.value.as_f64(),
            });
        }
    }
    Ok(())
}

/// Evaluator for the local norm
///
/// `V_r(x, y) = (∫_x^y v^{1/(1-r)})^{(1-r)/r}` for `0 < r < 1` and
/// `V_1(x, y) = ess sup_{(x,y)} v` for `r = 1`.
///
/// Building one precomputes the powered weight once so repeated interval
/// queries stay cheap.
#[derive(Debug, Clone)]
pub struct VrKernel<R> {
    r: R,
    mode: VrMode<R>,
}

#[derive(Debug, Clone)]
enum VrMode<R> {
    /// `r = 1`: essential supremum of `v` itself.
    Sup(Weight<R>),
    /// `r < 1`: integral of `v^{1/(1-r)}` raised to `(1-r)/r`.
    Int { powered: Weight<R>, outer: R },
}

impl<R: Real> VrKernel<R> {
    pub fn new(v: &Weight<R>, r: R) -> Result<Self> {
        if !(r > R::zero() && r <= R::one()) {
            return Err(Error::InvalidExponents { p: f64::NAN, q: f64::NAN, r: r.as_f64() });
        }
        let mode = if r == R::one() {
            VrMode::Sup(v.clone())
        } else {
            let inner = (R::one() - r).recip();
            VrMode::Int { powered: v.pow(inner), outer: (R::one() - r) / r }
        };
        Ok(VrKernel { r, mode })
    }

    pub fn r(&self) -> R {
        self.r
    }

    /// `V_r(x, y)`; zero when `y ≤ x`, `+∞` when the inner integral or
    /// supremum blows up.
    pub fn value(&self, x: R, y: R, quad: &Quadrature<R>) -> Result<ExtValue<R>> {
        if y <= x {
            return Ok(ExtValue::exact(R::zero()));
        }
        match &self.mode {
            VrMode::Sup(v) => {
                let s = v.sup_on(x, y)?;
                Ok(if s.is_finite() { ExtValue::finite(s, R::zero()) } else { ExtValue::infinite() })
            }
            VrMode::Int { powered, outer } => {
                let inner = powered.integral(x, y, quad)?;
                if inner.is_infinite() {
                    return Ok(ExtValue::infinite());
                }
                let value = xpow(inner.value, *outer);
                if !value.is_finite() {
                    return Ok(ExtValue::infinite());
                }
                let dv = if inner.value > R::zero() {
                    *outer * value / inner.value
                } else {
                    R::zero()
                };
                Ok(ExtValue::finite(value, inner.error * dv.abs()))
            }
        }
    }

    /// `V_r(x, y+) = lim_{t → y+} V_r(x, t)`.
    ///
    /// For `r < 1` the limit equals `V_r(x, y)` by continuity of the inner
    /// integral; for `r = 1` it joins the right limit of `v` at `y`.
    pub fn right_limit(&self, x: R, y: R, quad: &Quadrature<R>) -> Result<ExtValue<R>> {
        match &self.mode {
            VrMode::Int { .. } => self.value(x, y, quad),
            VrMode::Sup(v) => {
                if y >= v.domain().hi() {
                    return self.value(x, y, quad);
                }
                let base = self.value(x, y, quad)?;
                if base.is_infinite() {
                    return Ok(base);
                }
                let edge = v.right_limit(y.max(v.domain().lo()))?;
                Ok(if edge.is_finite() {
                    ExtValue::finite(base.value.max(edge), base.error)
                } else {
                    ExtValue::infinite()
                })
            }
        }
    }
}

/// One-shot `V_r(x, y)`.
pub fn v_r<R: Real>(v: &Weight<R>, r: R, x: R, y: R, quad: &Quadrature<R>) -> Result<ExtValue<R>> {
    VrKernel::new(v, r)?.value(x, y, quad)
}

/// One-shot `V_r(x, y+)`.
pub fn v_r_right_limit<R: Real>(
    v: &Weight<R>,
    r: R,
    x: R,
    y: R,
    quad: &Quadrature<R>,
) -> Result<ExtValue<R>> {
    VrKernel::new(v, r)?.right_limit(x, y, quad)
}
