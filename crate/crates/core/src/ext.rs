//! Extended non-negative values.
//!
//! Criteria evaluate to numbers in `[0, +∞]`. [`ExtValue`] pairs such a value
//! with a crude error estimate. The free functions implement the measure-
//! theoretic conventions `0 · ∞ = 0`, `1/∞ = 0` and `0/0 = 0`, which IEEE
//! arithmetic does not provide (it yields NaN).

use crate::real::Real;

/// A value in `[0, +∞]` together with an error estimate for the finite part.
///
/// `value` is an ordinary float where `+∞` encodes the extended point;
/// `error` estimates the absolute evaluation error when `value` is finite
/// and is meaningless otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtValue<R> {
    pub value: R,
    pub error: R,
}

impl<R: Real> ExtValue<R> {
    pub fn finite(value: R, error: R) -> Self {
        debug_assert!(value >= R::zero() && value.is_finite());
        ExtValue { value, error }
    }

    pub fn exact(value: R) -> Self {
        ExtValue { value, error: R::zero() }
    }

    pub fn infinite() -> Self {
        ExtValue { value: R::infinity(), error: R::zero() }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    /// Applies `f` to the value, scaling the error estimate by the local
    /// derivative magnitude `df`. Infinity is preserved.
    pub fn map_with_derivative(self, f: impl Fn(R) -> R, df: R) -> Self {
        if self.is_infinite() {
            ExtValue::infinite()
        } else {
            ExtValue { value: f(self.value), error: self.error * df.abs() }
        }
    }
}

/// Product with the convention `0 · ∞ = 0`.
pub fn xmul<R: Real>(a: R, b: R) -> R {
    if (a == R::zero() && b.is_infinite()) || (b == R::zero() && a.is_infinite()) {
        R::zero()
    } else {
        let p = a * b;
        debug_assert!(!p.is_nan(), "xmul produced NaN from {a:?} * {b:?}");
        p
    }
}

/// Quotient with the conventions `x/∞ = 0`, `0/0 = 0`.
pub fn xdiv<R: Real>(a: R, b: R) -> R {
    if b.is_infinite() {
        if a.is_infinite() { R::one() } else { R::zero() }
    } else if a == R::zero() && b == R::zero() {
        R::zero()
    } else {
        let q = a / b;
        debug_assert!(!q.is_nan(), "xdiv produced NaN from {a:?} / {b:?}");
        q
    }
}

/// `a^e` on `[0, ∞]` for a real exponent: `∞^e = ∞` for `e > 0`, `0` for
/// `e < 0`; `0^e = 0` for `e > 0`, `∞` for `e < 0`; `a^0 = 1` everywhere.
pub fn xpow<R: Real>(a: R, e: R) -> R {
    debug_assert!(a >= R::zero());
    if e == R::zero() {
        return R::one();
    }
    if a.is_infinite() {
        return if e > R::zero() { R::infinity() } else { R::zero() };
    }
    if a == R::zero() {
        return if e > R::zero() { R::zero() } else { R::infinity() };
    }
    let v = a.powf(e);
    debug_assert!(!v.is_nan(), "xpow produced NaN from {a:?}^{e:?}");
    v
}

/// Maximum of a possibly empty iterator over `[0, ∞]`, defaulting to `0`.
pub fn xmax<R: Real>(it: impl IntoIterator<Item = R>) -> R {
    it.into_iter().fold(R::zero(), |acc, v| {
        debug_assert!(!v.is_nan());
        if v > acc { v } else { acc }
    })
}
