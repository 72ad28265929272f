//! Open intervals `(a, b)` with `0 ≤ a < b ≤ ∞`.

use crate::error::{Error, Result};
use crate::real::Real;

/// The open interval `(a, b)`; `b` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<R> {
    lo: R,
    hi: R,
}

impl<R: Real> Interval<R> {
    pub fn new(lo: R, hi: R) -> Result<Self> {
        if lo.is_finite() && lo >= R::zero() && lo < hi && !hi.is_nan() {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvalidWeight {
                detail: format!("invalid interval ({lo}, {hi}); need 0 <= a < b <= inf"),
            })
        }
    }

    pub fn lo(&self) -> R {
        self.lo
    }

    pub fn hi(&self) -> R {
        self.hi
    }

    pub fn is_unbounded(&self) -> bool {
        self.hi.is_infinite()
    }

    /// Whether `x` lies in the open interval.
    pub fn contains(&self, x: R) -> bool {
        self.lo < x && x < self.hi
    }

    /// Whether `[x, y] ⊆ [a, b]` up to closure (endpoints allowed).
    pub fn covers(&self, x: R, y: R) -> bool {
        self.lo <= x && y <= self.hi
    }

    /// Intersection, if non-degenerate.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo < hi { Some(Interval { lo, hi }) } else { None }
    }

    /// A reference interior point: the midpoint for bounded intervals,
    /// `a + 1` for unbounded ones.
    pub fn interior_point(&self) -> R {
        if self.is_unbounded() {
            self.lo + R::one()
        } else {
            (self.lo + self.hi) * R::of(0.5)
        }
    }
}
