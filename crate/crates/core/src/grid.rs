//! Dyadic scan grids and memoized cell tables shared by the condition
//! evaluators and the equivalence checks.
//!
//! Everything here works on a fixed partition of `(a, b)` induced by a node
//! set: per-cell weight masses are computed once through the closed forms and
//! all derived quantities (tails, range masses, range sups) are assembled
//! from them without cancellation.

use crate::ext::ExtValue;
use crate::real::Real;
use crate::weights::quadrature::unit_breaks;
use crate::weights::{Quadrature, Weight};
use crate::{Error, Result};

/// Maps `s ∈ [0, 1]` onto `[a, b]`, compactifying when `b = ∞`.
pub fn stretch<R: Real>(a: R, b: R, s: R) -> R {
    if b.is_infinite() {
        if s >= R::one() {
            R::infinity()
        } else {
            a + s / (R::one() - s)
        }
    } else {
        a + (b - a) * s
    }
}

/// Interior scan nodes for one refinement level: geometric ladders toward
/// both endpoints plus a uniform part, mapped onto `(a, b)` and merged with
/// the pinned cut points (weight junctions, sequence points, ...).
pub fn scan_nodes<R: Real>(a: R, b: R, level: u32, pins: &[R]) -> Vec<R> {
    let geo = 20 + 7 * level;
    let uni = (7 + level).min(11);
    let mut out: Vec<R> = unit_breaks::<R>(geo, uni)
        .into_iter()
        .map(|s| stretch(a, b, s))
        .filter(|t| t.is_finite() && *t > a && *t < b)
        .collect();
    for &p in pins {
        if p.is_finite() && p > a && p < b {
            out.push(p);
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).expect("scan nodes are not NaN"));
    out.dedup_by(|x, y| *x == *y);
    out
}

/// Masses of one weight over the cells of a partition
/// `a = c_0 < c_1 < ... < c_m = b`.
///
/// Range and tail masses are served from one-sided cumulative sums picked to
/// avoid cancellation; short ranges are summed directly so that adjacent-cell
/// queries keep full relative precision however deep in a tail they sit.
pub struct CellTable<R> {
    cuts: Vec<R>,
    mass: Vec<R>,
    /// Number of `+∞` cells among `mass[..i]`.
    inf_before: Vec<u32>,
    /// Finite-part prefix sums, `prefix[i] = Σ mass[..i]`.
    prefix: Vec<R>,
    /// Finite-part suffix sums, `suffix[i] = Σ mass[i..]`.
    suffix: Vec<R>,
}

impl<R: Real> CellTable<R> {
    pub fn build(w: &Weight<R>, a: R, b: R, nodes: &[R], quad: &Quadrature<R>) -> Result<Self> {
        let mut cuts = Vec::with_capacity(nodes.len() + 2);
        cuts.push(a);
        cuts.extend_from_slice(nodes);
        cuts.push(b);
        let mut mass = Vec::with_capacity(cuts.len() - 1);
        for pair in cuts.windows(2) {
            let v = w.integral(pair[0], pair[1], quad)?;
            mass.push(if v.is_infinite() { R::infinity() } else { v.value });
        }
        let n = mass.len();
        let mut inf_before = vec![0u32; n + 1];
        let mut prefix = vec![R::zero(); n + 1];
        for i in 0..n {
            inf_before[i + 1] = inf_before[i] + u32::from(mass[i].is_infinite());
            prefix[i + 1] = prefix[i] + if mass[i].is_infinite() { R::zero() } else { mass[i] };
        }
        let mut suffix = vec![R::zero(); n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1] + if mass[i].is_infinite() { R::zero() } else { mass[i] };
        }
        Ok(CellTable { cuts, mass, inf_before, prefix, suffix })
    }

    /// Partition points `c_0 = a, ..., c_m = b`.
    pub fn cuts(&self) -> &[R] {
        &self.cuts
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// `∫_{c_i}^{c_j} w`, `+∞` allowed.
    pub fn range_mass(&self, i: usize, j: usize) -> R {
        debug_assert!(i <= j && j <= self.len());
        if self.inf_before[j] > self.inf_before[i] {
            return R::infinity();
        }
        if j - i <= 64 {
            let mut s = R::zero();
            for k in i..j {
                s = s + self.mass[k];
            }
            return s;
        }
        // Difference of cumulatives from the side with the smaller anchor.
        if self.suffix[j] <= self.prefix[i] {
            self.suffix[i] - self.suffix[j]
        } else {
            self.prefix[j] - self.prefix[i]
        }
    }

    /// Mass of the single cell `k`, `∫_{c_k}^{c_{k+1}} w`.
    pub fn cell(&self, k: usize) -> R {
        self.mass[k]
    }

    /// `∫_{c_i}^{b} w`, cancellation-free.
    pub fn tail_from(&self, i: usize) -> R {
        if self.inf_before[self.len()] > self.inf_before[i] {
            R::infinity()
        } else {
            self.suffix[i]
        }
    }

    /// `∫_{a}^{c_i} w`, cancellation-free.
    pub fn head_to(&self, i: usize) -> R {
        if self.inf_before[i] > 0 {
            R::infinity()
        } else {
            self.prefix[i]
        }
    }
}

/// O(1) range maxima over per-cell suprema (sparse table).
pub struct RangeMax<R> {
    rows: Vec<Vec<R>>,
}

impl<R: Real> RangeMax<R> {
    pub fn build(cell_sup: Vec<R>) -> Self {
        let n = cell_sup.len();
        let mut rows = vec![cell_sup];
        let mut width = 1usize;
        while 2 * width <= n {
            let prev = rows.last().expect("at least one row");
            let next: Vec<R> =
                (0..=n - 2 * width).map(|i| prev[i].max(prev[i + width])).collect();
            rows.push(next);
            width *= 2;
        }
        RangeMax { rows }
    }

    /// Supremum over the single cell `k`.
    pub fn cell(&self, k: usize) -> R {
        self.rows[0][k]
    }

    /// Max of cells `i..j` (half-open); 0 for an empty range.
    pub fn query(&self, i: usize, j: usize) -> R {
        debug_assert!(i <= j && j <= self.rows[0].len());
        if i == j {
            return R::zero();
        }
        let span = j - i;
        let level = usize::BITS as usize - 1 - span.leading_zeros() as usize;
        let width = 1usize << level;
        self.rows[level][i].max(self.rows[level][j - width])
    }
}

/// Memoized local norms `V_r(c_i, c_j)` over a partition: integral-powered
/// form for `r < 1`, range supremum for `r = 1`.
pub enum VrTable<R> {
    Int { cells: CellTable<R>, outer: R },
    Sup { rmq: RangeMax<R> },
}

impl<R: Real> VrTable<R> {
    pub fn build(
        v: &Weight<R>,
        r: R,
        a: R,
        b: R,
        nodes: &[R],
        quad: &Quadrature<R>,
    ) -> Result<Self> {
        if !(r > R::zero() && r <= R::one()) {
            return Err(Error::InvalidExponents {
                p: f64::NAN,
                q: f64::NAN,
                r: r.as_f64(),
            });
        }
        if r == R::one() {
            let mut cuts = Vec::with_capacity(nodes.len() + 2);
            cuts.push(a);
            cuts.extend_from_slice(nodes);
            cuts.push(b);
            let mut sups = Vec::with_capacity(cuts.len() - 1);
            for pair in cuts.windows(2) {
                sups.push(v.sup_on(pair[0], pair[1])?);
            }
            Ok(VrTable::Sup { rmq: RangeMax::build(sups) })
        } else {
            let powered = v.pow((R::one() - r).recip());
            let outer = (R::one() - r) / r;
            let cells = CellTable::build(&powered, a, b, nodes, quad)?;
            Ok(VrTable::Int { cells, outer })
        }
    }

    /// `V_r(c_i, c_j)`, `+∞` allowed.
    pub fn value(&self, i: usize, j: usize) -> R {
        match self {
            VrTable::Sup { rmq } => rmq.query(i, j),
            VrTable::Int { cells, outer } => {
                let m = cells.range_mass(i, j);
                if m == R::zero() {
                    R::zero()
                } else if m.is_infinite() {
                    R::infinity()
                } else {
                    m.powf(*outer)
                }
            }
        }
    }

    /// Per-cell building block for running range scans: the powered-`v` mass
    /// of cell `k` for `r < 1`, the cell supremum for `r = 1`.
    ///
    /// Extending one cell at a time keeps long row scans O(1) per step and,
    /// unlike differencing cumulatives, loses nothing to cancellation however
    /// short the range.
    pub fn cell_part(&self, k: usize) -> R {
        match self {
            VrTable::Sup { rmq } => rmq.cell(k),
            VrTable::Int { cells, .. } => cells.cell(k),
        }
    }

    /// Extends a running range accumulator by one cell part; start from `0`.
    pub fn accumulate(&self, acc: R, part: R) -> R {
        match self {
            VrTable::Sup { .. } => acc.max(part),
            VrTable::Int { .. } => acc + part,
        }
    }

    /// Turns an accumulated range into the `V_r` value.
    pub fn finish(&self, acc: R) -> R {
        match self {
            VrTable::Sup { .. } => acc,
            VrTable::Int { outer, .. } => {
                if acc == R::zero() {
                    R::zero()
                } else if acc.is_infinite() {
                    R::infinity()
                } else {
                    acc.powf(*outer)
                }
            }
        }
    }

    /// Limit of the range value as the range degenerates to the endpoint it
    /// shares with cell `k`. The integral form ramps from zero; the
    /// essential-sup form jumps straight to the local level of `v`, for which
    /// the cell sup is the vanishing-width stand-in.
    pub fn degenerate_limit(&self, k: usize) -> R {
        match self {
            VrTable::Sup { rmq } => rmq.cell(k),
            VrTable::Int { .. } => R::zero(),
        }
    }
}

/// Stop/divergence policy for refining supremum scans.
pub struct SupOptions<R> {
    /// Relative stabilization threshold between refinements.
    pub rel_stop: R,
    pub max_levels: u32,
    pub divergence_threshold: R,
}

impl<R: Real> Default for SupOptions<R> {
    fn default() -> Self {
        SupOptions {
            rel_stop: R::of(1e-6),
            max_levels: 8,
            divergence_threshold: R::of(1e12),
        }
    }
}

/// Supremum of a pointwise functional over `(lo, hi)` by dyadic scanning
/// with golden-section polish around the best node.
///
/// Divergence is declared when the running sup exceeds the threshold, grows
/// by a factor > 1.5 on two consecutive refinements, or keeps growing at a
/// steady geometric rate while the ladders deepen (a power-law blow-up at an
/// endpoint produces exactly that signature, and a convergent sup cannot:
/// its increments decay).
pub fn sup_refine<R: Real>(
    f: &dyn Fn(R) -> Result<R>,
    lo: R,
    hi: R,
    pins: &[R],
    opts: &SupOptions<R>,
) -> Result<ExtValue<R>> {
    let mut prev: Option<R> = None;
    let mut growth_streak = 0u32;
    let mut steady_streak = 0u32;
    for level in 0..opts.max_levels {
        let nodes = scan_nodes(lo, hi, level, pins);
        if nodes.is_empty() {
            return Ok(ExtValue::exact(R::zero()));
        }
        let mut best = R::neg_infinity();
        let mut best_at = 0usize;
        for (i, &t) in nodes.iter().enumerate() {
            let v = f(t)?;
            if v > best {
                best = v;
                best_at = i;
            }
        }
        if best.is_infinite() || best > opts.divergence_threshold {
            return Ok(ExtValue::infinite());
        }
        // Local polish: the functionals scanned here are continuous between
        // pinned points, so a golden-section pass around the best node
        // recovers the few digits the grid step loses.
        let bracket_lo = if best_at == 0 { lo } else { nodes[best_at - 1] };
        let bracket_hi = if best_at + 1 == nodes.len() { hi } else { nodes[best_at + 1] };
        if bracket_hi.is_finite() {
            best = best.max(golden_max(f, bracket_lo, bracket_hi)?);
        }
        if best > opts.divergence_threshold {
            return Ok(ExtValue::infinite());
        }
        if let Some(p) = prev {
            let delta = (best - p).abs();
            if delta <= opts.rel_stop * best.abs() {
                return Ok(ExtValue::finite(best, delta));
            }
            if best > R::of(1.5) * p && p > R::zero() {
                growth_streak += 1;
                if growth_streak >= 2 {
                    return Ok(ExtValue::infinite());
                }
            } else {
                growth_streak = 0;
            }
            if best > R::of(1.04) * p && p > R::zero() {
                steady_streak += 1;
                if steady_streak >= 4 {
                    return Ok(ExtValue::infinite());
                }
            } else {
                steady_streak = 0;
            }
        }
        prev = Some(best);
    }
    Err(Error::SearchFailure {
        detail: format!(
            "supremum scan did not stabilize within {} refinements on ({}, {})",
            opts.max_levels, lo, hi
        ),
    })
}

/// Golden-section maximum of `f` on `[lo, hi]`; assumes `f` continuous.
pub fn golden_max<R: Real>(f: &dyn Fn(R) -> Result<R>, lo: R, hi: R) -> Result<R> {
    let inv_phi = R::of(0.618_033_988_749_894_8);
    let mut a = lo;
    let mut b = hi;
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = fc.max(fd);
    for _ in 0..40 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d)?;
        }
        best = best.max(fc.max(fd));
        if b - a <= (a.abs() + b.abs()) * R::epsilon() * R::of(8.0) {
            break;
        }
    }
    Ok(best)
}
