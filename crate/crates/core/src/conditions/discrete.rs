//! Discrete-side constants of the criterion on the background ladder.
//!
//! The ladder `𝒲(x_k) = 2^{-k} 𝒲₀` turns each continuous constant into a
//! sum or supremum of per-level terms built from a shared kit: the scale
//! `κ_k = 1/𝒲(x_k)`, the local norms `V_r(x_{k-1}, x_k)`, the `u`-tails and
//! the per-cell embedding constants. Terms run over the truncated index
//! range; what the truncation may hide is reported as notes, not folded into
//! the value.

use crate::discretize::DiscretizingSequence;
use crate::ext::{xmul, xpow, ExtValue};
use crate::real::Real;
use crate::weights::functionals::VrKernel;
use crate::weights::{Quadrature, Weight};
use crate::{Error, Result};

use super::continuous::{h_inner_integral, h_sup};
use super::{DiscreteName, ParamTriple};

fn flat<R: Real>(e: ExtValue<R>) -> R {
    if e.is_infinite() {
        R::infinity()
    } else {
        e.value
    }
}

fn edge_note(best_k: i32, lo: i32, hi: i32) -> Option<String> {
    if lo == hi {
        None
    } else if best_k == lo {
        Some(format!("sup attained at the head of the truncated range (k={best_k})"))
    } else if best_k == hi {
        Some(format!("sup attained at the tail of the truncated range (k={best_k})"))
    } else {
        None
    }
}

fn share_note<R: Real>(first: R, last: R, total: R) -> Option<String> {
    if total.is_finite() && total > R::zero() {
        Some(format!(
            "truncation shares: head {:.2e}, tail {:.2e}",
            (first / total).as_f64(),
            (last / total).as_f64()
        ))
    } else {
        None
    }
}

/// Evaluates one discrete constant on a freshly built ladder; see
/// [`compute_discrete_with`].
#[allow(clippy::too_many_arguments)]
pub fn compute_discrete<R: Real>(
    name: DiscreteName,
    params: &ParamTriple<R>,
    u: &Weight<R>,
    v: &Weight<R>,
    w: &Weight<R>,
    quad: &Quadrature<R>,
    k_min: i32,
    k_max: i32,
) -> Result<ExtValue<R>> {
    let seq = DiscretizingSequence::build(w, quad, k_min, k_max)?;
    compute_discrete_with(name, params, u, v, w, &seq, quad).map(|(val, _)| val)
}

/// Evaluates one discrete constant over the truncated ladder of `seq`.
///
/// Terms exist per ladder cell `(x_{k-1}, x_k)`, so `k` runs from one past
/// the lowest solved index to the highest; an empty range yields exact zero
/// with a note. Constants whose exponents require a strict parameter
/// ordering reject triples outside it, mirroring their continuous partners.
#[allow(clippy::too_many_arguments)]
pub fn compute_discrete_with<R: Real>(
    name: DiscreteName,
    params: &ParamTriple<R>,
    u: &Weight<R>,
    v: &Weight<R>,
    w: &Weight<R>,
    seq: &DiscretizingSequence<R>,
    quad: &Quadrature<R>,
) -> Result<(ExtValue<R>, Vec<String>)> {
    params.validate()?;
    let ParamTriple { p, q, r } = *params;
    let one = R::one();
    use DiscreteName::*;
    match name {
        A2 | A4 if r >= p => return Err(Error::RegimeViolation { required: "r < p" }),
        A3 | A4 | B3 | B4 if q >= p => {
            return Err(Error::RegimeViolation { required: "q < p" });
        }
        B2 | B3 if q >= one => return Err(Error::RegimeViolation { required: "q < 1" }),
        _ => {}
    }
    let lo = seq.k_lo() + 1;
    let hi = seq.k_hi();
    if lo > hi {
        return Ok((ExtValue::exact(R::zero()), vec!["empty-range".into()]));
    }
    let b = w.domain().hi();
    let mut notes = Vec::new();

    // Shared per-level ingredients for the ladder-side constants.
    let vcell = |k: i32| -> Result<R> {
        VrKernel::new(v, r)?.value(seq.x(k - 1), seq.x(k), quad).map(flat)
    };
    let utail = |k: i32| -> Result<R> { u.integral(seq.x(k), b, quad).map(flat) };
    // `∫_{x_k}^{x_{k+1}} u`, with the deepest cell closed at `b`.
    let ucell_next = |k: i32| -> Result<R> {
        let y = if k < hi { seq.x(k + 1) } else { b };
        u.integral(seq.x(k), y, quad).map(flat)
    };

    let val = match name {
        A1 => {
            let vk = VrKernel::new(v, r)?;
            let ip = p.recip();
            let iq = q.recip();
            let mut best = R::zero();
            let mut best_k = lo;
            for k in lo..=hi {
                let vv = flat(vk.value(seq.x(k - 1), seq.x(k), quad)?);
                let t = xmul(xpow(seq.kappa(k), ip), xmul(vv, xpow(utail(k)?, iq)));
                if t > best {
                    best = t;
                    best_k = k;
                }
            }
            notes.extend(edge_note(best_k, lo, hi));
            ExtValue { value: best, error: R::zero() }
        }
        A2 => {
            let ik = r / (p - r);
            let gv = p * r / (p - r);
            let op = (p - r) / (p * r);
            let iq = q.recip();
            let mut inner = R::zero();
            let mut best = R::zero();
            let mut best_k = lo;
            for k in lo..=hi {
                inner = inner + xmul(xpow(seq.kappa(k), ik), xpow(vcell(k)?, gv));
                let t = xmul(xpow(utail(k)?, iq), xpow(inner, op));
                if t > best {
                    best = t;
                    best_k = k;
                }
            }
            notes.extend(edge_note(best_k, lo, hi));
            ExtValue { value: best, error: R::zero() }
        }
        A3 => {
            let beta = q / (p - q);
            let gv = p * q / (p - q);
            let mut runmax = R::zero();
            let mut total = R::zero();
            let mut first = R::zero();
            let mut last = R::zero();
            for k in lo..=hi {
                let cand = xmul(xpow(seq.kappa(k), beta), xpow(vcell(k)?, gv));
                if cand > runmax {
                    runmax = cand;
                }
                let term = xmul(ucell_next(k)?, xmul(xpow(utail(k)?, beta), runmax));
                if k == lo {
                    first = term;
                }
                last = term;
                total = total + term;
            }
            notes.push("deepest u-cell closed at the right endpoint".into());
            notes.extend(share_note(first, last, total));
            ExtValue { value: xpow(total, (p - q) / (p * q)), error: R::zero() }
        }
        A4 => {
            let ik = r / (p - r);
            let gv = p * r / (p - r);
            let oi = q * (p - r) / (r * (p - q));
            let beta = q / (p - q);
            let mut inner = R::zero();
            let mut total = R::zero();
            let mut first = R::zero();
            let mut last = R::zero();
            for k in lo..=hi {
                inner = inner + xmul(xpow(seq.kappa(k), ik), xpow(vcell(k)?, gv));
                let term =
                    xmul(ucell_next(k)?, xmul(xpow(utail(k)?, beta), xpow(inner, oi)));
                if k == lo {
                    first = term;
                }
                last = term;
                total = total + term;
            }
            notes.push("deepest u-cell closed at the right endpoint".into());
            notes.extend(share_note(first, last, total));
            ExtValue { value: xpow(total, (p - q) / (p * q)), error: R::zero() }
        }
        B1 => {
            let ip = p.recip();
            let mut best = R::zero();
            let mut best_err = R::zero();
            let mut best_k = lo;
            for k in lo..=hi {
                let h = h_sup(u, v, r, q, seq.x(k - 1), seq.x(k), quad)?;
                let f = xpow(seq.kappa(k), ip);
                let t = xmul(f, flat(h));
                if t > best {
                    best = t;
                    best_err = if h.is_infinite() { R::zero() } else { f * h.error };
                    best_k = k;
                }
            }
            notes.extend(edge_note(best_k, lo, hi));
            ExtValue { value: best, error: best_err }
        }
        B2 => {
            let ip = p.recip();
            let op = (one - q) / q;
            let mut best = R::zero();
            let mut best_err = R::zero();
            let mut best_k = lo;
            for k in lo..=hi {
                let i = h_inner_integral(u, v, r, q, seq.x(k - 1), seq.x(k), quad)?;
                let f = xpow(seq.kappa(k), ip);
                let t = xmul(f, xpow(flat(i), op));
                if t > best {
                    best = t;
                    best_err = if i.is_infinite() || i.value == R::zero() {
                        R::zero()
                    } else {
                        f * op * i.value.powf(op - one) * i.error
                    };
                    best_k = k;
                }
            }
            notes.extend(edge_note(best_k, lo, hi));
            ExtValue { value: best, error: best_err }
        }
        B3 => {
            let beta = q / (p - q);
            let e = p * (one - q) / (p - q);
            let mut total = R::zero();
            let mut err = R::zero();
            let mut first = R::zero();
            let mut last = R::zero();
            for k in lo..=hi {
                let i = h_inner_integral(u, v, r, q, seq.x(k - 1), seq.x(k), quad)?;
                let f = xpow(seq.kappa(k), beta);
                let term = xmul(f, xpow(flat(i), e));
                if i.is_finite() && i.value > R::zero() {
                    err = err + f * e * i.value.powf(e - one) * i.error;
                }
                if k == lo {
                    first = term;
                }
                last = term;
                total = total + term;
            }
            notes.extend(share_note(first, last, total));
            let op = (p - q) / (p * q);
            let value = xpow(total, op);
            let error = if total.is_finite() && total > R::zero() {
                op * total.powf(op - one) * err
            } else {
                R::zero()
            };
            ExtValue { value, error }
        }
        B4 => {
            let beta = q / (p - q);
            // The cell sup enters through the same `U^{1/q} V_r` scan as the
            // large-q embedding constant: its `pq/(p-q)` power matches the
            // displayed `U^{p/(p-q)} V_r^{pq/(p-q)}` exactly.
            let e = p * q / (p - q);
            let mut total = R::zero();
            let mut err = R::zero();
            let mut first = R::zero();
            let mut last = R::zero();
            for k in lo..=hi {
                let h = h_sup(u, v, r, q, seq.x(k - 1), seq.x(k), quad)?;
                let f = xpow(seq.kappa(k), beta);
                let term = xmul(f, xpow(flat(h), e));
                if h.is_finite() && h.value > R::zero() {
                    err = err + f * e * h.value.powf(e - one) * h.error;
                }
                if k == lo {
                    first = term;
                }
                last = term;
                total = total + term;
            }
            notes.extend(share_note(first, last, total));
            let op = (p - q) / (p * q);
            let value = xpow(total, op);
            let error = if total.is_finite() && total > R::zero() {
                op * total.powf(op - one) * err
            } else {
                R::zero()
            };
            ExtValue { value, error }
        }
    };
    Ok((val, notes))
}
