//! Weight functions on an interval `(a, b)`.
//!
//! A weight is positive and finite on the open interval; the supported
//! shapes are closed under pointwise powers, which is what the criteria
//! evaluators rely on: every inner integrand they need reduces to a closed
//! form again.
//!
//! * `power`: `c · t^alpha · (P - t)^beta` with `P` the right endpoint the
//!   weight was built on (`beta != 0` requires a bounded interval),
//! * `exp`: `c · e^{alpha t}`,
//! * `table`: piecewise log-linear interpolation through positive samples,
//! * `piecewise`: contiguous pieces of the above.
//!
//! At piece junctions the right-continuous representative is used; all
//! pointwise values on a measure-zero set are immaterial to the integrals
//! and essential suprema computed from weights.

pub mod closed_form;
pub mod functionals;
pub mod quadrature;

use crate::error::{Error, Result};
use crate::ext::{xmax, xpow, ExtValue};
use crate::interval::Interval;
use crate::real::Real;

use closed_form::{
    int_beta_kernel, int_exp_elem, int_loglinear_cell, int_power_elem, int_power_offset,
};
use quadrature::integrate_fn;
pub use quadrature::Quadrature;

#[derive(Debug, Clone, PartialEq)]
enum Kind<R> {
    Power { c: R, alpha: R, beta: R, pivot: R },
    Exp { c: R, alpha: R },
    Table { ts: Vec<R>, vs: Vec<R>, logv: Vec<R> },
    Piecewise { pieces: Vec<Weight<R>> },
}

/// A positive weight function with its interval of definition.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight<R> {
    kind: Kind<R>,
    domain: Interval<R>,
}

impl<R: Real> Weight<R> {
    /// `c · t^alpha · (b - t)^beta` on `domain`; `beta != 0` requires a
    /// bounded domain.
    pub fn power(domain: Interval<R>, c: R, alpha: R, beta: R) -> Result<Self> {
        if !(c > R::zero() && c.is_finite() && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidWeight {
                detail: format!("power weight needs finite exponents and c > 0; got c={c}, alpha={alpha}, beta={beta}"),
            });
        }
        if beta != R::zero() && domain.is_unbounded() {
            return Err(Error::InvalidWeight {
                detail: "power weight with beta != 0 requires a bounded interval".into(),
            });
        }
        Ok(Weight { kind: Kind::Power { c, alpha, beta, pivot: domain.hi() }, domain })
    }

    /// `c · t^alpha · (pivot - t)^beta` with a pivot at or beyond the right
    /// endpoint (mirroring and restriction produce such shapes).
    pub(crate) fn power_with_pivot(
        domain: Interval<R>,
        c: R,
        alpha: R,
        beta: R,
        pivot: R,
    ) -> Result<Self> {
        if !(c > R::zero() && c.is_finite() && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidWeight {
                detail: format!("power weight needs finite exponents and c > 0; got c={c}, alpha={alpha}, beta={beta}"),
            });
        }
        if beta != R::zero() && !(pivot.is_finite() && pivot >= domain.hi()) {
            return Err(Error::InvalidWeight {
                detail: "power pivot must be finite and not precede the right endpoint".into(),
            });
        }
        Ok(Weight { kind: Kind::Power { c, alpha, beta, pivot }, domain })
    }

    /// The constant weight `c`.
    pub fn constant(domain: Interval<R>, c: R) -> Result<Self> {
        Self::power(domain, c, R::zero(), R::zero())
    }

    /// The constant weight `1`.
    pub fn one(domain: Interval<R>) -> Self {
        Self::constant(domain, R::one()).expect("constant 1 is always valid")
    }

    /// `c · e^{alpha t}` on `domain`.
    pub fn exponential(domain: Interval<R>, c: R, alpha: R) -> Result<Self> {
        if c > R::zero() && c.is_finite() && alpha.is_finite() {
            Ok(Weight { kind: Kind::Exp { c, alpha }, domain })
        } else {
            Err(Error::InvalidWeight {
                detail: format!("exponential weight needs finite alpha and c > 0; got c={c}, alpha={alpha}"),
            })
        }
    }

    /// Log-linear interpolation through `(t, v)` samples with strictly
    /// increasing abscissae and positive values. Queries outside the sample
    /// hull fail with [`Error::OutsideTableHull`].
    pub fn table(domain: Interval<R>, points: &[(R, R)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidWeight { detail: "table needs at least two points".into() });
        }
        let mut ts = Vec::with_capacity(points.len());
        let mut vs = Vec::with_capacity(points.len());
        for &(t, v) in points {
            if !(t.is_finite() && v.is_finite() && v > R::zero()) {
                return Err(Error::InvalidWeight {
                    detail: format!("table point ({t}, {v}) must be finite with v > 0"),
                });
            }
            if let Some(&prev) = ts.last() {
                if t <= prev {
                    return Err(Error::InvalidWeight {
                        detail: "table abscissae must be strictly increasing".into(),
                    });
                }
            }
            ts.push(t);
            vs.push(v);
        }
        let logv = vs.iter().map(|v| v.ln()).collect();
        Ok(Weight { kind: Kind::Table { ts, vs, logv }, domain })
    }

    /// Contiguous pieces covering one interval.
    pub fn piecewise(pieces: Vec<Weight<R>>) -> Result<Self> {
        let first = pieces.first().ok_or(Error::EmptyInput { detail: "piecewise weight" })?;
        let mut hi = first.domain.lo();
        for piece in &pieces {
            if piece.domain.lo() != hi {
                return Err(Error::InvalidWeight {
                    detail: format!(
                        "piecewise pieces must be contiguous; gap between {hi} and {}",
                        piece.domain.lo()
                    ),
                });
            }
            hi = piece.domain.hi();
        }
        let domain = Interval::new(first.domain.lo(), hi)?;
        if pieces.len() == 1 {
            return Ok(pieces.into_iter().next().expect("len checked"));
        }
        Ok(Weight { kind: Kind::Piecewise { pieces }, domain })
    }

    pub fn domain(&self) -> Interval<R> {
        self.domain
    }

    /// Value at an interior point.
    pub fn eval(&self, t: R) -> Result<R> {
        if !self.domain.contains(t) {
            return Err(Error::OutOfDomain {
                point: t.as_f64(),
                lo: self.domain.lo().as_f64(),
                hi: self.domain.hi().as_f64(),
            });
        }
        self.value_at(t)
    }

    /// Value without the open-interval check (junction points allowed).
    fn value_at(&self, t: R) -> Result<R> {
        match &self.kind {
            Kind::Power { c, alpha, beta, pivot } => {
                let mut v = *c;
                if *alpha != R::zero() {
                    v = v * t.powf(*alpha);
                }
                if *beta != R::zero() {
                    v = v * (*pivot - t).powf(*beta);
                }
                Ok(v)
            }
            Kind::Exp { c, alpha } => Ok(*c * (*alpha * t).exp()),
            Kind::Table { ts, vs, logv } => {
                let (lo, hi) = (ts[0], *ts.last().expect("non-empty"));
                if t < lo || t > hi {
                    return Err(Error::OutsideTableHull {
                        point: t.as_f64(),
                        lo: lo.as_f64(),
                        hi: hi.as_f64(),
                    });
                }
                let i = match ts.iter().position(|&x| x > t) {
                    Some(i) => i - 1,
                    None => ts.len() - 2,
                };
                if t == ts[i] {
                    return Ok(vs[i]);
                }
                let s = (t - ts[i]) / (ts[i + 1] - ts[i]);
                Ok((logv[i] + s * (logv[i + 1] - logv[i])).exp())
            }
            Kind::Piecewise { pieces } => self.piece_at(pieces, t).value_at(t),
        }
    }

    /// Piece whose half-open interval `[lo, hi)` contains `t` (the last
    /// piece also covers its right endpoint).
    fn piece_at<'a>(&self, pieces: &'a [Weight<R>], t: R) -> &'a Weight<R> {
        pieces
            .iter()
            .find(|p| p.domain.lo() <= t && t < p.domain.hi())
            .unwrap_or_else(|| pieces.last().expect("non-empty"))
    }

    /// `lim_{s → t+} w(s)` for `t ∈ [a, b)`; `+∞` at a left endpoint where
    /// the weight blows up.
    pub fn right_limit(&self, t: R) -> Result<R> {
        if !(self.domain.lo() <= t && t < self.domain.hi()) {
            return Err(Error::OutOfDomain {
                point: t.as_f64(),
                lo: self.domain.lo().as_f64(),
                hi: self.domain.hi().as_f64(),
            });
        }
        match &self.kind {
            Kind::Power { c, alpha, .. } if t == R::zero() => Ok(if *alpha < R::zero() {
                R::infinity()
            } else if *alpha > R::zero() {
                R::zero()
            } else {
                self.value_at(t)?
            }),
            Kind::Piecewise { pieces } => self.piece_at(pieces, t).right_limit(t),
            _ => self.value_at(t),
        }
    }

    /// The constant value, if the weight is constant.
    pub fn as_constant(&self) -> Option<R> {
        match &self.kind {
            Kind::Power { c, alpha, beta, .. } => {
                (*alpha == R::zero() && *beta == R::zero()).then_some(*c)
            }
            Kind::Exp { c, alpha } => (*alpha == R::zero()).then_some(*c),
            Kind::Table { vs, .. } => vs.iter().all(|v| *v == vs[0]).then_some(vs[0]),
            Kind::Piecewise { pieces } => {
                let c = pieces[0].as_constant()?;
                pieces.iter().all(|p| p.as_constant() == Some(c)).then_some(c)
            }
        }
    }

    /// Pointwise multiplication by a positive constant.
    pub fn scale(&self, s: R) -> Self {
        debug_assert!(s > R::zero() && s.is_finite());
        let kind = match &self.kind {
            Kind::Power { c, alpha, beta, pivot } => {
                Kind::Power { c: *c * s, alpha: *alpha, beta: *beta, pivot: *pivot }
            }
            Kind::Exp { c, alpha } => Kind::Exp { c: *c * s, alpha: *alpha },
            Kind::Table { ts, vs, .. } => {
                let vs: Vec<R> = vs.iter().map(|v| *v * s).collect();
                let logv = vs.iter().map(|v| v.ln()).collect();
                Kind::Table { ts: ts.clone(), vs, logv }
            }
            Kind::Piecewise { pieces } => {
                Kind::Piecewise { pieces: pieces.iter().map(|p| p.scale(s)).collect() }
            }
        };
        Weight { kind, domain: self.domain }
    }

    /// Pointwise power `w^k`; the family is closed under real powers.
    pub fn pow(&self, k: R) -> Self {
        debug_assert!(k.is_finite());
        let kind = match &self.kind {
            Kind::Power { c, alpha, beta, pivot } => Kind::Power {
                c: c.powf(k),
                alpha: *alpha * k,
                beta: *beta * k,
                pivot: *pivot,
            },
            Kind::Exp { c, alpha } => Kind::Exp { c: c.powf(k), alpha: *alpha * k },
            Kind::Table { ts, vs, logv } => {
                let vs: Vec<R> = vs.iter().map(|v| v.powf(k)).collect();
                let logv = logv.iter().map(|l| *l * k).collect();
                Kind::Table { ts: ts.clone(), vs, logv }
            }
            Kind::Piecewise { pieces } => {
                Kind::Piecewise { pieces: pieces.iter().map(|p| p.pow(k)).collect() }
            }
        };
        Weight { kind, domain: self.domain }
    }

    /// Restriction to `(lo, hi) ⊆ (a, b)`. Power pieces keep their original
    /// `(P - t)` reference point.
    pub fn restrict(&self, lo: R, hi: R) -> Result<Self> {
        if !(self.domain.covers(lo, hi) && lo < hi) {
            return Err(Error::OutOfDomain {
                point: lo.as_f64(),
                lo: self.domain.lo().as_f64(),
                hi: self.domain.hi().as_f64(),
            });
        }
        let domain = Interval::new(lo, hi)?;
        match &self.kind {
            Kind::Power { .. } | Kind::Exp { .. } => Ok(Weight { kind: self.kind.clone(), domain }),
            Kind::Table { ts, .. } => {
                let mut pts = Vec::new();
                if hi.is_infinite() {
                    return Err(Error::OutsideTableHull {
                        point: f64::INFINITY,
                        lo: ts[0].as_f64(),
                        hi: ts.last().expect("non-empty").as_f64(),
                    });
                }
                pts.push((lo, self.value_at(lo)?));
                for &t in ts {
                    if t > lo && t < hi {
                        pts.push((t, self.value_at(t)?));
                    }
                }
                pts.push((hi, self.value_at(hi)?));
                Self::table(domain, &pts)
            }
            Kind::Piecewise { pieces } => {
                let mut out = Vec::new();
                for p in pieces {
                    let plo = p.domain.lo().max(lo);
                    let phi = p.domain.hi().min(hi);
                    if plo < phi {
                        out.push(p.restrict(plo, phi)?);
                    }
                }
                Self::piecewise(out)
            }
        }
    }

    /// Interior points where smoothness can break (piece boundaries and
    /// table nodes), sorted ascending.
    pub fn junctions(&self) -> Vec<R> {
        let mut j = match &self.kind {
            Kind::Piecewise { pieces } => {
                let mut j: Vec<R> = pieces.iter().skip(1).map(|p| p.domain.lo()).collect();
                for p in pieces {
                    j.extend(p.junctions());
                }
                j
            }
            Kind::Table { ts, .. } => ts[1..ts.len() - 1].to_vec(),
            _ => Vec::new(),
        };
        j.sort_by(|a, b| a.partial_cmp(b).expect("junctions are not NaN"));
        j.dedup_by(|a, b| *a == *b);
        j
    }

    /// The reflected weight `s ↦ w(b - s)` on `(0, b - a)`.
    ///
    /// Right-tail integrals `∫_{b-δ}^b w` become head integrals of the
    /// mirror evaluated at `δ` directly; forming `b - δ` in the scalar type
    /// would quantize δ to the spacing of floats near `b` and destroy the
    /// relative precision of deep tails.
    pub fn mirrored(&self) -> Result<Self> {
        let b = self.domain.hi();
        if b.is_infinite() {
            return Err(Error::NotRepresentable {
                detail: "cannot mirror a weight on an unbounded interval".into(),
            });
        }
        self.mirror_about(b)
    }

    fn mirror_about(&self, b: R) -> Result<Self> {
        let dom = Interval::new(b - self.domain.hi(), b - self.domain.lo())?;
        match &self.kind {
            Kind::Power { c, alpha, beta, pivot } => {
                if *beta == R::zero() {
                    // c (b-s)^alpha
                    Self::power_with_pivot(dom, *c, R::zero(), *alpha, b)
                } else if *pivot == b {
                    // c (b-s)^alpha s^beta
                    Self::power_with_pivot(dom, *c, *beta, *alpha, b)
                } else {
                    Err(Error::NotRepresentable {
                        detail: "mirror of a power weight pivoted inside the domain".into(),
                    })
                }
            }
            Kind::Exp { c, alpha } => {
                let scaled = *c * (*alpha * b).exp();
                if !(scaled.is_finite() && scaled > R::zero()) {
                    return Err(Error::NotRepresentable {
                        detail: "mirrored exponential coefficient overflows".into(),
                    });
                }
                Self::exponential(dom, scaled, -*alpha)
            }
            Kind::Table { ts, vs, .. } => {
                let pts: Vec<(R, R)> = ts
                    .iter()
                    .zip(vs)
                    .rev()
                    .map(|(&t, &v)| (b - t, v))
                    .collect();
                Self::table(dom, &pts)
            }
            Kind::Piecewise { pieces } => {
                let mut out = Vec::with_capacity(pieces.len());
                for p in pieces.iter().rev() {
                    out.push(p.mirror_about(b)?);
                }
                Self::piecewise(out)
            }
        }
    }

    /// Pointwise product, when the result stays in the representable family
    /// (matching kinds or a constant factor). Both factors must share the
    /// same interval.
    pub fn try_mul(&self, other: &Weight<R>) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::NotRepresentable {
                detail: format!(
                    "product of weights on different intervals ({}, {}) vs ({}, {})",
                    self.domain.lo(),
                    self.domain.hi(),
                    other.domain.lo(),
                    other.domain.hi()
                ),
            });
        }
        if let Some(c) = self.as_constant() {
            return Ok(other.scale(c));
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(c));
        }
        let piecewise_split = matches!(self.kind, Kind::Piecewise { .. })
            || matches!(other.kind, Kind::Piecewise { .. });
        if piecewise_split {
            let mut cuts: Vec<R> = self
                .junctions()
                .into_iter()
                .chain(other.junctions())
                .filter(|&t| self.domain.contains(t))
                .collect();
            cuts.push(self.domain.lo());
            cuts.push(self.domain.hi());
            cuts.sort_by(|a, b| a.partial_cmp(b).expect("junctions are not NaN"));
            cuts.dedup_by(|a, b| *a == *b);
            let mut pieces = Vec::new();
            for w in cuts.windows(2) {
                let a = self.restrict(w[0], w[1])?;
                let b = other.restrict(w[0], w[1])?;
                pieces.push(a.try_mul(&b)?);
            }
            return Self::piecewise(pieces);
        }
        match (&self.kind, &other.kind) {
            (
                Kind::Power { c: c1, alpha: a1, beta: b1, pivot: p1 },
                Kind::Power { c: c2, alpha: a2, beta: b2, pivot: p2 },
            ) => {
                let pivot = if *b1 == R::zero() {
                    *p2
                } else if *b2 == R::zero() || p1 == p2 {
                    *p1
                } else {
                    return Err(Error::NotRepresentable {
                        detail: format!("power weights with distinct reference points {p1} and {p2}"),
                    });
                };
                Ok(Weight {
                    kind: Kind::Power {
                        c: *c1 * *c2,
                        alpha: *a1 + *a2,
                        beta: *b1 + *b2,
                        pivot,
                    },
                    domain: self.domain,
                })
            }
            (Kind::Exp { c: c1, alpha: a1 }, Kind::Exp { c: c2, alpha: a2 }) => Ok(Weight {
                kind: Kind::Exp { c: *c1 * *c2, alpha: *a1 + *a2 },
                domain: self.domain,
            }),
            (Kind::Table { ts: t1, .. }, Kind::Table { ts: t2, .. }) => {
                let mut ts: Vec<R> = t1.iter().chain(t2.iter()).copied().collect();
                ts.sort_by(|a, b| a.partial_cmp(b).expect("table abscissae are not NaN"));
                ts.dedup_by(|a, b| *a == *b);
                let mut pts = Vec::with_capacity(ts.len());
                for t in ts {
                    pts.push((t, self.value_at(t)? * other.value_at(t)?));
                }
                Self::table(self.domain, &pts)
            }
            _ => Err(Error::NotRepresentable {
                detail: "product of weights of different shapes".into(),
            }),
        }
    }

    /// `∫_x^y w(t) dt` through the closed forms, with adaptive quadrature
    /// only for power-product shapes whose exponents fall outside the
    /// incomplete-beta range. Divergent integrals evaluate to `+∞`.
    pub fn integral(&self, x: R, y: R, quad: &Quadrature<R>) -> Result<ExtValue<R>> {
        if y <= x {
            return Ok(ExtValue::exact(R::zero()));
        }
        if !self.domain.covers(x, y) {
            return Err(Error::OutOfDomain {
                point: x.as_f64(),
                lo: self.domain.lo().as_f64(),
                hi: self.domain.hi().as_f64(),
            });
        }
        let round_off = |v: R| {
            if v.is_infinite() {
                ExtValue::infinite()
            } else {
                ExtValue::finite(v, v * R::epsilon() * R::of(32.0))
            }
        };
        match &self.kind {
            Kind::Power { c, alpha, beta, pivot } => {
                if *beta == R::zero() {
                    return Ok(round_off(*c * int_power_elem(*alpha, x, y)));
                }
                if *alpha == R::zero() {
                    // In the offset variable u = pivot - t; the width y - x is
                    // passed exactly so head integrals of mirrored weights do
                    // not lose it to the float grid at the pivot.
                    return Ok(round_off(*c * int_power_offset(*beta, *pivot - x, y - x)));
                }
                let minus_one = -R::one();
                if (x == R::zero() && *alpha <= minus_one) || (y == *pivot && *beta <= minus_one) {
                    return Ok(ExtValue::infinite());
                }
                if *alpha > minus_one && *beta > minus_one {
                    let kernel =
                        int_beta_kernel(*alpha + R::one(), *beta + R::one(), x / *pivot, y / *pivot, quad)?;
                    let scale = *c * pivot.powf(*alpha + *beta + R::one());
                    return Ok(ExtValue::finite(scale * kernel, scale * kernel * R::of(1e-12)));
                }
                // One exponent is ≤ -1 with its endpoint excluded, so the
                // integrand is smooth on [x, y] up to at most one integrable
                // endpoint singularity. Substituting the matching fractional
                // power of the distance to that endpoint flattens it; point
                // sampling of the raw integrand would lose the mass hiding
                // below one ulp.
                let (c, alpha, beta, pivot) = (*c, *alpha, *beta, *pivot);
                let scale = |v: ExtValue<R>, k: R| {
                    if v.is_infinite() { v } else { ExtValue::finite(v.value * k, v.error * k) }
                };
                if y == pivot && beta < R::zero() {
                    let e = R::one() + beta;
                    let f = move |sig: R| (pivot - sig.powf(e.recip())).powf(alpha);
                    let v = integrate_fn(&f, R::zero(), (pivot - x).powf(e), quad)?;
                    return Ok(scale(v, c / e));
                }
                if x == R::zero() && alpha < R::zero() {
                    let e = R::one() + alpha;
                    let f = move |tau: R| (pivot - tau.powf(e.recip())).powf(beta);
                    let v = integrate_fn(&f, R::zero(), y.powf(e), quad)?;
                    return Ok(scale(v, c / e));
                }
                let f = move |t: R| c * t.powf(alpha) * (pivot - t).powf(beta);
                integrate_fn(&f, x, y, quad)
            }
            Kind::Exp { c, alpha } => Ok(round_off(*c * int_exp_elem(*alpha, x, y))),
            Kind::Table { ts, vs, logv } => {
                let (hlo, hhi) = (ts[0], *ts.last().expect("non-empty"));
                if x < hlo || y > hhi {
                    return Err(Error::OutsideTableHull {
                        point: if x < hlo { x.as_f64() } else { y.as_f64() },
                        lo: hlo.as_f64(),
                        hi: hhi.as_f64(),
                    });
                }
                let mut acc = R::zero();
                for i in 0..ts.len() - 1 {
                    let c = ts[i].max(x);
                    let d = ts[i + 1].min(y);
                    if c < d {
                        let slope = (logv[i + 1] - logv[i]) / (ts[i + 1] - ts[i]);
                        let vc = if c == ts[i] { vs[i] } else { self.value_at(c)? };
                        acc = acc + int_loglinear_cell(vc, slope, c, d);
                    }
                }
                Ok(round_off(acc))
            }
            Kind::Piecewise { pieces } => {
                let mut acc = R::zero();
                let mut err = R::zero();
                for p in pieces {
                    let c = p.domain.lo().max(x);
                    let d = p.domain.hi().min(y);
                    if c < d {
                        let part = p.integral(c, d, quad)?;
                        if part.is_infinite() {
                            return Ok(ExtValue::infinite());
                        }
                        acc = acc + part.value;
                        err = err + part.error;
                    }
                }
                Ok(ExtValue::finite(acc, err))
            }
        }
    }

    /// Essential supremum over the open interval `(x, y)`, `+∞` allowed.
    ///
    /// Exact for every representable shape: each piece is monotone between
    /// its endpoint limits and at most one interior critical point.
    pub fn sup_on(&self, x: R, y: R) -> Result<R> {
        if y <= x {
            return Ok(R::zero());
        }
        if !self.domain.covers(x, y) {
            return Err(Error::OutOfDomain {
                point: x.as_f64(),
                lo: self.domain.lo().as_f64(),
                hi: self.domain.hi().as_f64(),
            });
        }
        match &self.kind {
            Kind::Power { c, alpha, beta, pivot } => {
                let mut cands = Vec::with_capacity(3);
                if x == R::zero() {
                    if *alpha < R::zero() {
                        return Ok(R::infinity());
                    }
                    cands.push(if *alpha > R::zero() {
                        R::zero()
                    } else {
                        *c * xpow(*pivot, *beta)
                    });
                } else {
                    cands.push(self.value_at(x)?);
                }
                if y == *pivot {
                    if *beta < R::zero() {
                        return Ok(R::infinity());
                    }
                    cands.push(if *beta > R::zero() { R::zero() } else { *c * xpow(*pivot, *alpha) });
                } else {
                    cands.push(self.value_at(y)?);
                }
                if *alpha + *beta != R::zero() && pivot.is_finite() {
                    let t = *alpha * *pivot / (*alpha + *beta);
                    if x < t && t < y && R::zero() < t && t < *pivot {
                        cands.push(self.value_at(t)?);
                    }
                }
                Ok(xmax(cands))
            }
            Kind::Exp { c, alpha } => {
                let at_hi = if y.is_infinite() {
                    if *alpha > R::zero() {
                        return Ok(R::infinity());
                    } else if *alpha == R::zero() {
                        *c
                    } else {
                        R::zero()
                    }
                } else {
                    self.value_at(y)?
                };
                Ok(self.value_at(x)?.max(at_hi))
            }
            Kind::Table { ts, vs, .. } => {
                let (hlo, hhi) = (ts[0], *ts.last().expect("non-empty"));
                if x < hlo || y > hhi {
                    return Err(Error::OutsideTableHull {
                        point: if x < hlo { x.as_f64() } else { y.as_f64() },
                        lo: hlo.as_f64(),
                        hi: hhi.as_f64(),
                    });
                }
                let mut best = self.value_at(x)?.max(self.value_at(y)?);
                for (t, v) in ts.iter().zip(vs) {
                    if x < *t && *t < y {
                        best = best.max(*v);
                    }
                }
                Ok(best)
            }
            Kind::Piecewise { pieces } => {
                let mut best = R::zero();
                for p in pieces {
                    let c = p.domain.lo().max(x);
                    let d = p.domain.hi().min(y);
                    if c < d {
                        best = best.max(p.sup_on(c, d)?);
                    }
                }
                Ok(best)
            }
        }
    }
}
