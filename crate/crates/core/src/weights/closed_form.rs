//! Closed-form antiderivatives for the symbolic weight kinds.
//!
//! All routines return extended values in `[0, +∞]` and are written in
//! cancellation-free form (`exp_m1`/`ln_1p`) so that tiny tail integrals
//! near the right endpoint keep full relative precision.

use crate::error::Result;
use crate::real::Real;
use crate::weights::quadrature::{integrate_fn, Quadrature};

/// `ln(y/x)` computed without cancellation when `y/x` is close to 1.
fn ln_ratio<R: Real>(x: R, y: R) -> R {
    let d = y - x;
    if d.abs() < R::of(0.25) * x {
        (d / x).ln_1p()
    } else {
        (y / x).ln()
    }
}

/// `∫_x^y t^alpha dt` for `0 ≤ x < y ≤ ∞`; `+∞` when the integral diverges.
pub fn int_power_elem<R: Real>(alpha: R, x: R, y: R) -> R {
    debug_assert!(R::zero() <= x && x <= y);
    if x == y {
        return R::zero();
    }
    let a1 = alpha + R::one();
    if a1 == R::zero() {
        // ∫ t^{-1} = ln t; diverges at both 0 and ∞.
        return if x == R::zero() || y.is_infinite() { R::infinity() } else { ln_ratio(x, y) };
    }
    if y.is_infinite() {
        return if a1 < R::zero() && x > R::zero() {
            -x.powf(a1) / a1
        } else {
            R::infinity()
        };
    }
    if x == R::zero() {
        return if a1 > R::zero() { y.powf(a1) / a1 } else { R::infinity() };
    }
    let e = a1 * ln_ratio(x, y);
    if e > R::of(500.0) {
        // x^{a1} may underflow while exp_m1 overflows; the direct difference
        // is cancellation-free in this regime.
        (y.powf(a1) - x.powf(a1)) / a1
    } else {
        x.powf(a1) * e.exp_m1() / a1
    }
}

/// `∫_{u-d}^{u} s^beta ds` parameterized by the upper endpoint and the exact
/// width `0 ≤ d ≤ u`.
///
/// Forming the lower endpoint `u - d` in floats would absorb the low bits of
/// `d` once it sits many orders below `u`; the ladder solves live on exactly
/// those bits, so the width enters the antiderivative difference directly.
pub fn int_power_offset<R: Real>(beta: R, u: R, d: R) -> R {
    debug_assert!(R::zero() <= d && d <= u * (R::one() + R::epsilon() * R::of(4.0)));
    if d == R::zero() {
        return R::zero();
    }
    let b1 = beta + R::one();
    if d >= u {
        // Lower endpoint 0.
        return if b1 > R::zero() { u.powf(b1) / b1 } else { R::infinity() };
    }
    let r = d / u;
    if b1 == R::zero() {
        return -(-r).ln_1p();
    }
    let e = b1 * (-r).ln_1p();
    if e > R::of(500.0) {
        // (u-d)^{b1} dwarfs u^{b1}; the direct difference cannot cancel.
        (u.powf(b1) - (u - d).powf(b1)) / b1
    } else {
        u.powf(b1) * -e.exp_m1() / b1
    }
}

/// `∫_x^y e^{alpha t} dt` for `0 ≤ x < y ≤ ∞`; `+∞` when divergent.
pub fn int_exp_elem<R: Real>(alpha: R, x: R, y: R) -> R {
    debug_assert!(x <= y);
    if x == y {
        return R::zero();
    }
    if alpha == R::zero() {
        return if y.is_infinite() { R::infinity() } else { y - x };
    }
    if y.is_infinite() {
        return if alpha < R::zero() { (alpha * x).exp() / -alpha } else { R::infinity() };
    }
    (alpha * x).exp() * (alpha * (y - x)).exp_m1() / alpha
}

/// Integral of a log-linear table cell: the interpolant `v(c)·e^{m (t-c)}`
/// over `[c, d]`.
pub fn int_loglinear_cell<R: Real>(vc: R, slope: R, c: R, d: R) -> R {
    debug_assert!(c <= d);
    let h = d - c;
    let mh = slope * h;
    if mh.abs() < R::of(1e-12) {
        vc * h * (R::one() + mh * R::of(0.5))
    } else {
        vc * mh.exp_m1() / slope
    }
}

/// Natural log of the gamma function (Lanczos, g = 7), valid for `x > 0`.
// Published coefficients, kept at source precision.
#[allow(clippy::excessive_precision)]
pub fn ln_gamma<R: Real>(x: R) -> R {
    const COEF: [f64; 8] = [
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(x > R::zero());
    if x < R::of(0.5) {
        // Reflection: ln Γ(x) = ln π - ln sin(πx) - ln Γ(1-x).
        let pi = R::of(std::f64::consts::PI);
        return pi.ln() - (pi * x).sin().ln() - ln_gamma(R::one() - x);
    }
    let xm1 = x - R::one();
    let mut a = R::of(0.999_999_999_999_809_93);
    for (i, &c) in COEF.iter().enumerate() {
        a = a + R::of(c) / (xm1 + R::of(i as f64 + 1.0));
    }
    let t = xm1 + R::of(7.5);
    R::of(0.918_938_533_204_672_74) // ln(2π)/2
        + (xm1 + R::of(0.5)) * t.ln()
        - t
        + a.ln()
}

/// Continued fraction for the regularized incomplete beta (Lentz).
fn betacf<R: Real>(a: R, b: R, x: R) -> R {
    let tiny = R::of(1e-300).max(R::min_positive_value());
    let eps = R::epsilon() * R::of(8.0);
    let qab = a + b;
    let qap = a + R::one();
    let qam = a - R::one();
    let mut c = R::one();
    let mut d = R::one() - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = d.recip();
    let mut h = d;
    for m in 1..400 {
        let m = R::of(m as f64);
        let m2 = m + m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = R::one() + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = R::one() + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        h = h * d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = R::one() + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = R::one() + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let del = d * c;
        h = h * del;
        if (del - R::one()).abs() < eps {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)` for `a, b > 0`, `x ∈ [0, 1]`.
pub fn beta_reg<R: Real>(a: R, b: R, x: R) -> R {
    debug_assert!(a > R::zero() && b > R::zero());
    if x <= R::zero() {
        return R::zero();
    }
    if x >= R::one() {
        return R::one();
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() + ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b);
    let front = ln_front.exp();
    if x < (a + R::one()) / (a + b + R::of(2.0)) {
        front * betacf(a, b, x) / a
    } else {
        R::one() - front * betacf(b, a, R::one() - x) / b
    }
}

/// Complete beta `B(a, b)`.
pub fn beta_complete<R: Real>(a: R, b: R) -> R {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// `∫_{z1}^{z2} s^{a-1} (1-s)^{b-1} ds` for `a, b > 0`, `0 ≤ z1 ≤ z2 ≤ 1`.
///
/// Uses whichever tail of the regularized function avoids cancellation; for
/// very narrow ranges, where any difference of cumulatives cancels, it falls
/// back to direct panel quadrature (the integrand is smooth strictly inside
/// `(0, 1)`).
pub fn int_beta_kernel<R: Real>(a: R, b: R, z1: R, z2: R, quad: &Quadrature<R>) -> Result<R> {
    debug_assert!(R::zero() <= z1 && z1 <= z2 && z2 <= R::one());
    if z1 == z2 {
        return Ok(R::zero());
    }
    let total = beta_complete(a, b);
    let (diff, scale) = if z2 <= R::of(0.5) {
        let lo = beta_reg(a, b, z1);
        let hi = beta_reg(a, b, z2);
        (hi - lo, hi.max(lo))
    } else if z1 >= R::of(0.5) {
        // Complementary tails: I_z(a,b) = 1 - I_{1-z}(b,a).
        let lo = beta_reg(b, a, R::one() - z2);
        let hi = beta_reg(b, a, R::one() - z1);
        (hi - lo, hi.max(lo))
    } else {
        let head = beta_reg(a, b, z1);
        let tail = beta_reg(b, a, R::one() - z2);
        (R::one() - head - tail, R::one())
    };
    if diff > R::of(1e-5) * scale && diff > R::zero() {
        return Ok(diff * total);
    }
    // Narrow range: integrate directly, away from the endpoints.
    let f = |s: R| s.powf(a - R::one()) * (R::one() - s).powf(b - R::one());
    Ok(integrate_fn(&f, z1, z2, quad)?.value)
}
