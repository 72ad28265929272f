//! Search-based lower bounds on the best constants, independent of the
//! closed-form criteria: the weighted inequality ratio maximized over step
//! functions, the ladder and cell inequalities maximized over sequences, the
//! local embedding functional, and the reduction of the two-norm embedding
//! problem to the single-inequality form.
//!
//! Every candidate ever evaluated is admissible, so every reported value is
//! a true lower bound of the target constant up to quadrature error. The
//! search is multiplicative coordinate ascent: the ratio is positively
//! homogeneous and non-smooth, so fixed factor moves that preserve
//! positivity beat gradient schemes here. Restarts are deterministic for a
//! fixed seed and reduce by maximum in restart order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::conditions::{compute_h, ParamTriple};
use crate::discretize::DiscretizingSequence;
use crate::ext::{xdiv, xmax, xmul, xpow};
use crate::grid::scan_nodes;
use crate::real::Real;
use crate::weights::functionals::{validate_background, VrKernel};
use crate::weights::{Quadrature, Weight};
use crate::{Error, Result};

/// Non-negative step function: `heights[i]` on the open piece between
/// consecutive breakpoints, the first piece starting at the interval's left
/// endpoint and the last ending at its right endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction<R> {
    /// Strictly increasing interior breakpoints.
    pub breakpoints: Vec<R>,
    /// One height per piece, `breakpoints.len() + 1` in total.
    pub heights: Vec<R>,
}

impl<R: Real> StepFunction<R> {
    pub fn new(breakpoints: Vec<R>, heights: Vec<R>) -> Result<Self> {
        let f = StepFunction { breakpoints, heights };
        f.validate()?;
        Ok(f)
    }

    /// Piece layout and sign checks; zero heights are allowed, ratios reject
    /// the a.e. zero candidate separately.
    pub fn validate(&self) -> Result<()> {
        if self.heights.len() != self.breakpoints.len() + 1 {
            return Err(Error::EmptyInput { detail: "step function needs one height per piece" });
        }
        if !self.breakpoints.iter().all(|b| b.is_finite()) {
            return Err(Error::EmptyInput { detail: "step breakpoints must be finite" });
        }
        if self.breakpoints.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::EmptyInput { detail: "step breakpoints must be strictly increasing" });
        }
        if !self.heights.iter().all(|h| *h >= R::zero() && h.is_finite()) {
            return Err(Error::EmptyInput { detail: "step heights must be non-negative and finite" });
        }
        Ok(())
    }

    /// Height of the piece containing `t`; breakpoints resolve to the piece
    /// on their right.
    pub fn value_at(&self, t: R) -> R {
        self.heights[self.breakpoints.partition_point(|b| *b <= t)]
    }
}

/// Maximizer payload: a step function for the continuous searches, a
/// coefficient sequence for the discrete ones.
#[derive(Debug, Clone, PartialEq)]
pub enum Argmax<R> {
    Step(StepFunction<R>),
    Sequence(Vec<R>),
}

impl<R> Argmax<R> {
    pub fn step(&self) -> Option<&StepFunction<R>> {
        match self {
            Argmax::Step(f) => Some(f),
            Argmax::Sequence(_) => None,
        }
    }

    pub fn sequence(&self) -> Option<&[R]> {
        match self {
            Argmax::Step(_) => None,
            Argmax::Sequence(a) => Some(a),
        }
    }
}

/// Outcome of one maximization run.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<R> {
    /// Best admissible ratio found; a lower bound of the target constant.
    pub lower_bound: R,
    /// Candidate attaining `lower_bound`.
    pub argmax: Argmax<R>,
    /// Candidate evaluations spent across all restarts.
    pub iterations: usize,
    /// True when the winning restart finished a full sweep without an
    /// improving move; false when its budget ran out first.
    pub converged: bool,
    /// Cells in the evaluation grid, or entries in the sequence problem.
    pub grid_size: usize,
    /// Improvements of the winning restart as `(evaluation, ratio)` pairs,
    /// non-decreasing in both coordinates.
    pub trajectory: Vec<(usize, R)>,
}

/// Search settings shared by every oracle.
#[derive(Debug, Clone)]
pub struct OracleOptions<R> {
    /// Target cell count for the continuous evaluation grid.
    pub grid_n: usize,
    /// Ascent restarts: flat, best single bump, then seeded random starts.
    pub restarts: usize,
    /// Candidate evaluation budget per restart.
    pub iters: usize,
    /// Seed for the random restarts.
    pub seed: u64,
    /// Extra restart from a given candidate, resampled onto the evaluation
    /// grid; lets a refined run warm-start from a coarser argmax. Continuous
    /// searches only.
    pub warm_start: Option<StepFunction<R>>,
}

impl<R: Real> Default for OracleOptions<R> {
    fn default() -> Self {
        OracleOptions { grid_n: 512, restarts: 8, iters: 2000, seed: 0, warm_start: None }
    }
}

/// Move ladder: coarse doubling plus fine ten-percent trims.
const FACTORS: [f64; 4] = [2.0, 0.5, 1.1, 1.0 / 1.1];

/// Four-point Gauss-Legendre abscissas and weights on `[-1, 1]`.
const GL_X: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_26,
    0.339_981_043_584_856_26,
    0.861_136_311_594_052_6,
];
const GL_W: [f64; 4] = [
    0.347_854_845_137_453_85,
    0.652_145_154_862_546_2,
    0.652_145_154_862_546_2,
    0.347_854_845_137_453_85,
];

/// One side of a ratio, `(∫_a^b (∫_a^t f^rho dV)^sigma dU)^inv`, with the
/// inner cumulant `dV` closed-form per cell and the outer measure `dU`
/// carried by per-cell nodes whose weights are rescaled to reproduce the
/// exact cell mass.
struct HalfNorm<R> {
    rho: R,
    sigma: R,
    inv: R,
    /// Mass-matched outer node weights per active cell.
    upw: Vec<[R; 4]>,
    /// Inner partial masses from the cell's left cut to each node.
    vpart: Vec<[R; 4]>,
    /// Inner full cell masses.
    vcell: Vec<R>,
    /// `Some(right_half_infinite)` for cells of infinite outer mass; such
    /// cells contribute everything or nothing.
    inf_cell: Vec<Option<bool>>,
    /// Outer mass beyond the last active cell.
    utail: R,
    /// Rounding direction for infinite cells. A numerator must never be
    /// overstated and a denominator never understated, or the reported
    /// ratio stops being a certified bound.
    ceil: bool,
}

impl<R: Real> HalfNorm<R> {
    fn eval(&self, h: &[R]) -> R {
        let mut acc = R::zero();
        let mut g = R::zero();
        for (j, &hj) in h.iter().enumerate() {
            let fr = xpow(hj, self.rho);
            let step = xmul(fr, self.vcell[j]);
            if let Some(right) = self.inf_cell[j] {
                // The cumulant is nondecreasing, so mass at the right edge
                // sees `g + step` and mass at the left edge sees `g`. On the
                // floor side a left singularity met with `g = 0` is dropped
                // even if the cumulant rises inside the cell, which can only
                // lower the reported bound; the ceiling side must charge
                // that rise in full.
                let seen = if right || self.ceil { g + step } else { g };
                if seen > R::zero() {
                    return R::infinity();
                }
            } else {
                for t in 0..4 {
                    let val = g + xmul(fr, self.vpart[j][t]);
                    acc = acc + xmul(self.upw[j][t], xpow(val, self.sigma));
                }
            }
            g = g + step;
            if acc.is_infinite() {
                return R::infinity();
            }
        }
        acc = acc + xmul(self.utail, xpow(g, self.sigma));
        xpow(acc, self.inv)
    }
}

#[allow(clippy::too_many_arguments)]
fn build_half<R: Real>(
    outer: &Weight<R>,
    inner: &Weight<R>,
    rho: R,
    sigma: R,
    inv: R,
    cuts: &[R],
    active: usize,
    quad: &Quadrature<R>,
    ceil: bool,
) -> Result<HalfNorm<R>> {
    let half = R::of(0.5);
    let quarter = R::of(0.25);
    let mut upw = Vec::with_capacity(active);
    let mut vpart = Vec::with_capacity(active);
    let mut vcell = Vec::with_capacity(active);
    let mut inf_cell = Vec::with_capacity(active);
    for j in 0..active {
        let (lo, hi) = (cuts[j], cuts[j + 1]);
        let mid = (lo + hi) * half;
        let mut nodes = [R::zero(); 4];
        for (t, node) in nodes.iter_mut().enumerate() {
            *node = mid + (hi - lo) * half * R::of(GL_X[t]);
        }
        let m = outer.integral(lo, hi, quad)?;
        if m.is_infinite() {
            let right = outer.integral(mid, hi, quad)?.is_infinite();
            inf_cell.push(Some(right));
            upw.push([R::zero(); 4]);
        } else {
            let mut raw = [R::zero(); 4];
            let mut s = R::zero();
            for t in 0..4 {
                raw[t] = R::of(GL_W[t]) * (hi - lo) * half * outer.eval(nodes[t])?;
                s = s + raw[t];
            }
            let mut wts = [R::zero(); 4];
            if s > R::zero() && s.is_finite() {
                let c = m.value / s;
                for t in 0..4 {
                    wts[t] = raw[t] * c;
                }
            } else if m.value > R::zero() {
                // Nodes all sit on a null set of the density: spread the
                // exact mass evenly rather than dropping it.
                for w in &mut wts {
                    *w = m.value * quarter;
                }
            }
            inf_cell.push(None);
            upw.push(wts);
        }
        let vc = inner.integral(lo, hi, quad)?;
        vcell.push(if vc.is_infinite() { R::infinity() } else { vc.value });
        let mut vp = [R::zero(); 4];
        for (t, part) in vp.iter_mut().enumerate() {
            let e = inner.integral(lo, nodes[t], quad)?;
            *part = if e.is_infinite() { R::infinity() } else { e.value };
        }
        vpart.push(vp);
    }
    let ncells = cuts.len() - 1;
    let utail = if active < ncells {
        let e = outer.integral(cuts[active], cuts[ncells], quad)?;
        if e.is_infinite() {
            R::infinity()
        } else {
            e.value
        }
    } else {
        R::zero()
    };
    Ok(HalfNorm { rho, sigma, inv, upw, vpart, vcell, inf_cell, utail, ceil })
}

enum Denominator<R> {
    /// Second half-norm of the same shape.
    Norm(HalfNorm<R>),
    /// Plain integral of the candidate itself.
    Plain { widths: Vec<R> },
}

/// A maximization problem over heights on a fixed cell partition; cells
/// beyond `active` (the unbounded remainder, if any) carry no height and
/// enter only through the exact tail masses.
struct Problem<R> {
    cuts: Vec<R>,
    active: usize,
    num: HalfNorm<R>,
    den: Denominator<R>,
}

impl<R: Real> Problem<R> {
    fn eval_pair(&self, h: &[R]) -> (R, R) {
        let lhs = self.num.eval(h);
        let rhs = match &self.den {
            Denominator::Norm(n) => n.eval(h),
            Denominator::Plain { widths } => {
                let mut s = R::zero();
                for (hj, wj) in h.iter().zip(widths) {
                    s = s + *hj * *wj;
                }
                s
            }
        };
        (lhs, rhs)
    }

    /// Ascent objective: admissible ratios as-is, the a.e. zero candidate
    /// and indeterminate pairings pushed below every valid score.
    fn score(&self, h: &[R]) -> R {
        let (lhs, rhs) = self.eval_pair(h);
        if rhs.is_nan() || rhs <= R::zero() {
            return -R::one();
        }
        if rhs.is_infinite() {
            return if lhs.is_infinite() { -R::one() } else { R::zero() };
        }
        xdiv(lhs, rhs)
    }
}

/// Smallest scan level whose uniform part reaches the requested cell count.
fn level_for(grid_n: usize) -> u32 {
    let mut level = 1u32;
    while (1usize << (7 + level)) < grid_n && level < 6 {
        level += 1;
    }
    level
}

fn continuous_cuts<R: Real>(a: R, b: R, grid_n: usize, pins: &[R]) -> (Vec<R>, usize) {
    let nodes = scan_nodes(a, b, level_for(grid_n), pins);
    let mut cuts = Vec::with_capacity(nodes.len() + 2);
    cuts.push(a);
    cuts.extend(nodes);
    cuts.push(b);
    let ncells = cuts.len() - 1;
    // Candidates must vanish on an unbounded last cell.
    let active = if b.is_infinite() { ncells - 1 } else { ncells };
    (cuts, active)
}

fn shared_domain<R: Real>(weights: &[&Weight<R>], detail: &str) -> Result<()> {
    let d = weights[0].domain();
    for w in &weights[1..] {
        let o = w.domain();
        if o.lo() != d.lo() || o.hi() != d.hi() {
            return Err(Error::InvalidWeight { detail: detail.into() });
        }
    }
    Ok(())
}

fn sample_heights<R: Real>(f: &StepFunction<R>, cuts: &[R], active: usize) -> Vec<R> {
    let half = R::of(0.5);
    (0..active).map(|j| f.value_at((cuts[j] + cuts[j + 1]) * half)).collect()
}

struct RunOutcome<R> {
    score: R,
    arg: Vec<R>,
    converged: bool,
    used: usize,
    trajectory: Vec<(usize, R)>,
}

/// One coordinate-ascent pass from `h` under an evaluation budget. Sweeps
/// coordinates in order, keeps a move only when the score strictly improves,
/// and stops after a full sweep without improvement (converged) or when the
/// budget runs out. Zero coordinates stay zero: multiplicative moves cannot
/// leave them, which is what lets bump starts explore concentrated
/// candidates.
fn ascend<R: Real, F: Fn(&[R]) -> R>(
    score: &F,
    mut h: Vec<R>,
    budget: usize,
    used_before: usize,
    traj: &mut Vec<(usize, R)>,
) -> (R, Vec<R>, bool, usize) {
    if budget == 0 {
        return (-R::one(), h, false, 0);
    }
    let mut used = 1usize;
    let mut best = score(&h);
    if best >= R::zero() {
        traj.push((used_before + used, best));
    }
    if best.is_infinite() {
        return (best, h, true, used);
    }
    loop {
        let mut improved = false;
        for j in 0..h.len() {
            if h[j] == R::zero() {
                continue;
            }
            for f in FACTORS {
                if used == budget {
                    return (best, h, false, used);
                }
                let old = h[j];
                h[j] = old * R::of(f);
                let s = score(&h);
                used += 1;
                if s > best {
                    best = s;
                    improved = true;
                    traj.push((used_before + used, s));
                    if best.is_infinite() {
                        return (best, h, true, used);
                    }
                } else {
                    h[j] = old;
                }
            }
        }
        if !improved {
            return (best, h, true, used);
        }
    }
}

fn run_given<R: Real, F: Fn(&[R]) -> R>(score: &F, h: Vec<R>, budget: usize) -> RunOutcome<R> {
    let mut traj = Vec::new();
    let (best, arg, converged, used) = ascend(score, h, budget, 0, &mut traj);
    RunOutcome { score: best, arg, converged, used, trajectory: traj }
}

/// Scores every single-coordinate bump, then ascends from the best one.
fn run_bump_scan<R: Real, F: Fn(&[R]) -> R>(score: &F, n: usize, budget: usize) -> RunOutcome<R> {
    let mut traj = Vec::new();
    let mut used = 0usize;
    let mut best = -R::one();
    let mut best_j = 0usize;
    let mut h = vec![R::zero(); n];
    for j in 0..n {
        if used == budget {
            break;
        }
        h[j] = R::one();
        let s = score(&h);
        used += 1;
        if s > best {
            best = s;
            best_j = j;
            if s >= R::zero() {
                traj.push((used, s));
            }
        }
        h[j] = R::zero();
    }
    h[best_j] = R::one();
    let (refined, arg, converged, more) = ascend(score, h, budget - used, used, &mut traj);
    let score_out = if refined > best { refined } else { best };
    RunOutcome { score: score_out, arg, converged, used: used + more, trajectory: traj }
}

fn random_heights<R: Real>(n: usize, seed: u64, ordinal: u64) -> Vec<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(ordinal + 1));
    (0..n).map(|_| R::of((rng.gen::<f64>() * 6.0 - 3.0).exp())).collect()
}

enum Start<R> {
    Given(Vec<R>),
    BumpScan,
}

/// Runs the restart plan concurrently and reduces by maximum score, earlier
/// restarts winning ties, so the result is independent of scheduling.
fn run_search<R: Real, F: Fn(&[R]) -> R + Sync>(
    score: F,
    n: usize,
    opts: &OracleOptions<R>,
    warm: Option<Vec<R>>,
) -> (R, Vec<R>, bool, usize, Vec<(usize, R)>) {
    let restarts = opts.restarts.max(1);
    let iters = opts.iters.max(1);
    let mut plan: Vec<Start<R>> = vec![Start::Given(vec![R::one(); n])];
    if restarts >= 2 {
        plan.push(Start::BumpScan);
    }
    if let Some(wh) = warm {
        plan.push(Start::Given(wh));
    }
    for i in 2..restarts {
        plan.push(Start::Given(random_heights(n, opts.seed, (i - 2) as u64)));
    }
    let score = &score;
    let outcomes: Vec<RunOutcome<R>> = plan
        .into_par_iter()
        .map(|start| match start {
            Start::Given(h) => run_given(score, h, iters),
            Start::BumpScan => run_bump_scan(score, n, iters),
        })
        .collect();
    let mut best = 0usize;
    for (i, o) in outcomes.iter().enumerate() {
        if o.score > outcomes[best].score {
            best = i;
        }
    }
    let total = outcomes.iter().map(|o| o.used).sum();
    let mut winner = outcomes;
    let w = winner.swap_remove(best);
    (w.score, w.arg, w.converged, total, w.trajectory)
}

fn main_problem<R: Real>(
    params: &ParamTriple<R>,
    u: &Weight<R>,
    v: &Weight<R>,
    w: &Weight<R>,
    quad: &Quadrature<R>,
    grid_n: usize,
) -> Result<Problem<R>> {
    params.validate()?;
    shared_domain(&[u, v, w], "u, v and w must share one interval")?;
    validate_background(w, quad)?;
    let dom = w.domain();
    let mut pins = u.junctions();
    pins.extend(v.junctions());
    pins.extend(w.junctions());
    let (cuts, active) = continuous_cuts(dom.lo(), dom.hi(), grid_n, &pins);
    let ParamTriple { p, q, r } = *params;
    let num = build_half(u, v, r, q / r, q.recip(), &cuts, active, quad, false)?;
    let den = build_half(w, &Weight::one(dom), R::one(), p, p.recip(), &cuts, active, quad, true)?;
    Ok(Problem { cuts, active, num, den: Denominator::Norm(den) })
}

fn finish_continuous<R: Real>(problem: Problem<R>, opts: &OracleOptions<R>) -> Result<OracleResult<R>> {
    let warm = opts.warm_start.as_ref().map(|f| sample_heights(f, &problem.cuts, problem.active));
    let (best, h, converged, used, traj) = run_search(|h: &[R]| problem.score(h), problem.active, opts, warm);
    if best < R::zero() {
        return Err(Error::SearchFailure { detail: "no admissible candidate was evaluated".into() });
    }
    let ncells = problem.cuts.len() - 1;
    let mut heights = h;
    if problem.active < ncells {
        heights.push(R::zero());
    }
    let argmax = StepFunction { breakpoints: problem.cuts[1..ncells].to_vec(), heights };
    Ok(OracleResult {
        lower_bound: best,
        argmax: Argmax::Step(argmax),
        iterations: used,
        converged,
        grid_size: ncells,
        trajectory: traj,
    })
}

/// Ratio of the two sides of the weighted inequality at one given step
/// function: `(∫ (∫_a^t f^r v)^{q/r} u)^{1/q} / (∫ (∫_a^t f)^p w)^{1/p}`.
/// Inner cumulants are closed-form per piece; on an unbounded interval the
/// candidate is truncated at the deepest scan node.
///
/// Errors when the denominator vanishes (`f` zero a.e.) and when it
/// diverges (infinite background mass inside the candidate's support, which
/// the standing tail hypothesis rules out).
pub fn ratio_main<R: Real>(
    f: &StepFunction<R>,
    params: &ParamTriple<R>,
    u: &Weight<R>,
    v: &Weight<R>,
    w: &Weight<R>,
    quad: &Quadrature<R>,
) -> Result<R> {
    f.validate()?;
    params.validate()?;
    shared_domain(&[u, v, w], "u, v and w must share one interval")?;
    validate_background(w, quad)?;
    let dom = w.domain();
    for bp in &f.breakpoints {
        if !(*bp > dom.lo() && *bp < dom.hi()) {
            return Err(Error::OutOfDomain {
                point: bp.as_f64(),
                lo: dom.lo().as_f64(),
                hi: dom.hi().as_f64(),
            });
        }
    }
    let mut pins = u.junctions();
    pins.extend(v.junctions());
    pins.extend(w.junctions());
    pins.extend(f.breakpoints.iter().copied());
    let (cuts, active) = continuous_cuts(dom.lo(), dom.hi(), 512, &pins);
    let ParamTriple { p, q, r } = *params;
    let num = build_half(u, v, r, q / r, q.recip(), &cuts, active, quad, false)?;
    let den = build_half(w, &Weight::one(dom), R::one(), p, p.recip(), &cuts, active, quad, true)?;
    let problem = Problem { cuts, active, num, den: Denominator::Norm(den) };
    let h = sample_heights(f, &problem.cuts, problem.active);
    let (lhs, rhs) = problem.eval_pair(&h);
    if rhs == R::zero() {
        return Err(Error::EmptyInput { detail: "step function vanishes almost everywhere" });
    }
    if rhs.is_infinite() {
        let start = h.iter().position(|x| *x > R::zero()).unwrap_or(0);
        return Err(Error::HypothesisViolation {
            point: problem.cuts[start].as_f64(),
            tail: f64::INFINITY,
        });
    }
    Ok(xdiv(lhs, rhs))
}

/// Maximizes [`ratio_main`] over step functions on a fixed scan grid by
/// multiplicative coordinate ascent with deterministic restarts: the flat
/// candidate, the best single-cell bump, an optional warm start, and seeded
/// random heights.
pub fn maximize_main<R: Real>(
    params: &ParamTriple<R>,
    u: &Weight<R>,
    v: &Weight<R>,
    w: &Weight<R>,
    quad: &Quadrature<R>,
    opts: &OracleOptions<R>,
) -> Result<OracleResult<R>> {
    let problem = main_problem(params, u, v, w, quad, opts.grid_n)?;
    finish_continuous(problem, opts)
}

/// Maximizes the local embedding ratio
/// `(∫_x^y (∫_x^t f^r v)^{q/r} u)^{1/q} / ∫_x^y f` over step functions on
/// the window `(x, y)`; the searched value is the cell constant that the
/// closed-form evaluator reports.
#[allow(clippy::too_many_arguments)]
pub fn h_functional_oracle<R: Real>(
    u: &Weight<R>,
    v: &Weight<R>,
    r: R,
    q: R,
    x: R,
    y: R,
    quad: &Quadrature<R>,
    opts: &OracleOptions<R>,
) -> Result<OracleResult<R>> {
    if !(q.is_finite() && q > R::zero()) || !(r > R::zero() && r <= R::one()) {
        return Err(Error::InvalidExponents { p: f64::NAN, q: q.as_f64(), r: r.as_f64() });
    }
    shared_domain(&[u, v], "u and v must share one interval")?;
    let dom = u.domain();
    if !(x >= dom.lo() && x < y && y <= dom.hi()) {
        return Err(Error::OutOfDomain {
            point: x.as_f64(),
            lo: dom.lo().as_f64(),
            hi: dom.hi().as_f64(),
        });
    }
    let mut pins = u.junctions();
    pins.extend(v.junctions());
    let (cuts, active) = continuous_cuts(x, y, opts.grid_n, &pins);
    let num = build_half(u, v, r, q / r, q.recip(), &cuts, active, quad, false)?;
    let widths = (0..active).map(|j| cuts[j + 1] - cuts[j]).collect();
    finish_continuous(Problem { cuts, active, num, den: Denominator::Plain { widths } }, opts)
}

/// Maximizes the embedding ratio between two iterated weighted norms,
/// `‖f‖_{p2,q2;u2,v2} / ‖f‖_{p1,q1;u1,v1}`, directly over step functions.
/// The `p1`-th power of this supremum is the best constant of the reduced
/// single inequality, which is how [`cesaro_reduce`] is validated.
#[allow(clippy::too_many_arguments)]
pub fn cesaro_embedding_oracle<R: Real>(
    p1: R,
    q1: R,
    p2: R,
    q2: R,
    u1: &Weight<R>,
    v1: &Weight<R>,
    u2: &Weight<R>,
    v2: &Weight<R>,
    quad: &Quadrature<R>,
    opts: &OracleOptions<R>,
) -> Result<OracleResult<R>> {
    // Bad embedding exponents are reported through the induced triple.
    ParamTriple { p: q1 / p1, q: q2 / p1, r: p2 / p1 }.validate()?;
    shared_domain(&[u1, v1, u2, v2], "u1, v1, u2 and v2 must share one interval")?;
    let dom = u1.domain();
    let mut pins = u1.junctions();
    pins.extend(v1.junctions());
    pins.extend(u2.junctions());
    pins.extend(v2.junctions());
    let (cuts, active) = continuous_cuts(dom.lo(), dom.hi(), opts.grid_n, &pins);
    let num =
        build_half(&u2.pow(q2), &v2.pow(p2), p2, q2 / p2, q2.recip(), &cuts, active, quad, false)?;
    let den =
        build_half(&u1.pow(q1), &v1.pow(p1), p1, q1 / p1, q1.recip(), &cuts, active, quad, true)?;
    finish_continuous(Problem { cuts, active, num, den: Denominator::Norm(den) }, opts)
}

/// Rewrites the two-norm embedding problem as the single weighted
/// inequality: `r = p2/p1`, `q = q2/p1`, `p = q1/p1`, `u = u2^{q2}`,
/// `v = v2^{p2} v1^{-p2}`, `w = u1^{q1}`; the best constant of the result is
/// the `p1`-th power of the embedding constant. Rejects `p2 > p1`, where
/// only trivial weights satisfy the embedding, and weight pairs whose
/// quotient leaves the representable families.
#[allow(clippy::too_many_arguments, clippy::type_complexity)]
pub fn cesaro_reduce<R: Real>(
    p1: R,
    q1: R,
    p2: R,
    q2: R,
    u1: &Weight<R>,
    v1: &Weight<R>,
    u2: &Weight<R>,
    v2: &Weight<R>,
) -> Result<(ParamTriple<R>, Weight<R>, Weight<R>, Weight<R>)> {
    let params = ParamTriple { p: q1 / p1, q: q2 / p1, r: p2 / p1 };
    params.validate()?;
    if p2 > p1 {
        return Err(Error::TrivialWeightsRegime { r: params.r.as_f64() });
    }
    shared_domain(&[u1, v1, u2, v2], "u1, v1, u2 and v2 must share one interval")?;
    let u = u2.pow(q2);
    let w = u1.pow(q1);
    let v = v2.pow(p2).try_mul(&v1.pow(-p2))?;
    Ok((params, u, v, w))
}

/// Coefficients of the sequence inequalities on a truncated ladder.
#[derive(Debug, Clone, PartialEq)]
pub enum DiscreteProblem<R> {
    /// Cumulative form: `(Σ_k (Σ_{i≤k} layer_i a_i^r)^{q/r} outer_k)^{1/q}`
    /// against the `p`-norm of `a`.
    Ladder { layer: Vec<R>, outer: Vec<R> },
    /// Diagonal form: `(Σ_k diag_k a_k^q)^{1/q}` against the `p`-norm.
    Cell { diag: Vec<R> },
}

impl<R: Real> DiscreteProblem<R> {
    pub fn len(&self) -> usize {
        match self {
            DiscreteProblem::Ladder { layer, .. } => layer.len(),
            DiscreteProblem::Cell { diag } => diag.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self) -> Result<()> {
        let ok = |c: &[R]| c.iter().all(|x| *x >= R::zero() && !x.is_nan());
        match self {
            DiscreteProblem::Ladder { layer, outer } => {
                if layer.len() != outer.len() {
                    return Err(Error::EmptyInput {
                        detail: "ladder coefficient arrays differ in length",
                    });
                }
                if !ok(layer) || !ok(outer) {
                    return Err(Error::EmptyInput {
                        detail: "coefficients must be non-negative",
                    });
                }
            }
            DiscreteProblem::Cell { diag } => {
                if !ok(diag) {
                    return Err(Error::EmptyInput {
                        detail: "coefficients must be non-negative",
                    });
                }
            }
        }
        Ok(())
    }
}

fn discrete_pair<R: Real>(p: R, q: R, r: R, problem: &DiscreteProblem<R>, a: &[R]) -> (R, R) {
    let mut nrm = R::zero();
    for ak in a {
        nrm = nrm + xpow(*ak, p);
    }
    let rhs = xpow(nrm, p.recip());
    let lhs = match problem {
        DiscreteProblem::Ladder { layer, outer } => {
            let qr = q / r;
            let mut inner = R::zero();
            let mut acc = R::zero();
            for k in 0..a.len() {
                inner = inner + xmul(layer[k], xpow(a[k], r));
                acc = acc + xmul(xpow(inner, qr), outer[k]);
                if acc.is_infinite() {
                    break;
                }
            }
            xpow(acc, q.recip())
        }
        DiscreteProblem::Cell { diag } => {
            let mut acc = R::zero();
            for k in 0..a.len() {
                acc = acc + xmul(diag[k], xpow(a[k], q));
            }
            xpow(acc, q.recip())
        }
    };
    (lhs, rhs)
}

/// Value of the chosen sequence inequality ratio at one given non-negative
/// sequence; the discrete counterpart of [`ratio_main`].
pub fn ratio_discrete<R: Real>(
    params: &ParamTriple<R>,
    problem: &DiscreteProblem<R>,
    a: &[R],
) -> Result<R> {
    params.validate()?;
    problem.validate()?;
    if problem.is_empty() {
        return Err(Error::EmptyInput { detail: "no coefficients in the index range" });
    }
    if a.len() != problem.len() {
        return Err(Error::EmptyInput { detail: "sequence length differs from the coefficient range" });
    }
    if !a.iter().all(|x| *x >= R::zero() && x.is_finite()) {
        return Err(Error::EmptyInput { detail: "sequence entries must be non-negative and finite" });
    }
    let ParamTriple { p, q, r } = *params;
    let (lhs, rhs) = discrete_pair(p, q, r, problem, a);
    if rhs == R::zero() {
        return Err(Error::EmptyInput { detail: "sequence is identically zero" });
    }
    Ok(xdiv(lhs, rhs))
}

/// Maximizes a sequence inequality ratio over non-negative sequences with
/// the same ascent scheme as the continuous searches.
pub fn discrete_hardy_oracle<R: Real>(
    params: &ParamTriple<R>,
    problem: &DiscreteProblem<R>,
    opts: &OracleOptions<R>,
) -> Result<OracleResult<R>> {
    params.validate()?;
    problem.validate()?;
    let n = problem.len();
    if n == 0 {
        return Err(Error::EmptyInput { detail: "no coefficients in the index range" });
    }
    let ParamTriple { p, q, r } = *params;
    let score = |a: &[R]| {
        let (lhs, rhs) = discrete_pair(p, q, r, problem, a);
        if rhs.is_nan() || rhs <= R::zero() {
            return -R::one();
        }
        if rhs.is_infinite() {
            return if lhs.is_infinite() { -R::one() } else { R::zero() };
        }
        xdiv(lhs, rhs)
    };
    let (best, a, converged, used, traj) = run_search(score, n, opts, None);
    if best < R::zero() {
        return Err(Error::SearchFailure { detail: "no admissible candidate was evaluated".into() });
    }
    Ok(OracleResult {
        lower_bound: best,
        argmax: Argmax::Sequence(a),
        iterations: used,
        converged,
        grid_size: n,
        trajectory: traj,
    })
}

/// Exact supremum of the diagonal ratio `(Σ diag_k a_k^q)^{1/q} / ‖a‖_p`
/// over non-negative sequences, by norm duality: a powered coefficient sum
/// for `q < p`, the largest coefficient root otherwise. Cross-checks the
/// searched optimum of the diagonal form.
pub fn cell_duality_optimum<R: Real>(p: R, q: R, diag: &[R]) -> R {
    if q < p {
        let e = p / (p - q);
        let mut s = R::zero();
        for d in diag {
            s = s + xpow(*d, e);
        }
        xpow(s, (p - q) / (p * q))
    } else {
        xmax(diag.iter().map(|d| xpow(*d, q.recip())))
    }
}

fn flat<R: Real>(e: crate::ext::ExtValue<R>) -> R {
    if e.is_infinite() {
        R::infinity()
    } else {
        e.value
    }
}

/// Cumulative-form coefficients on the truncated index range of `seq`: per
/// index the scale-weighted local norm `κ_k^{r/p} V_r(x_{k-1}, x_k)^r` and
/// the `u`-cell mass `∫_{x_k}^{x_{k+1}} u`, the deepest cell closed at the
/// right endpoint.
pub fn ladder_problem<R: Real>(
    params: &ParamTriple<R>,
    u: &Weight<R>,
    v: &Weight<R>,
    seq: &DiscretizingSequence<R>,
    quad: &Quadrature<R>,
) -> Result<DiscreteProblem<R>> {
    params.validate()?;
    let ParamTriple { p, r, .. } = *params;
    let lo = seq.k_lo() + 1;
    let hi = seq.k_hi();
    let mut layer = Vec::new();
    let mut outer = Vec::new();
    if lo <= hi {
        let vk = VrKernel::new(v, r)?;
        let b = u.domain().hi();
        let e = r / p;
        for k in lo..=hi {
            let vv = flat(vk.value(seq.x(k - 1), seq.x(k), quad)?);
            layer.push(xmul(xpow(seq.kappa(k), e), xpow(vv, r)));
            let y = if k < hi { seq.x(k + 1) } else { b };
            outer.push(flat(u.integral(seq.x(k), y, quad)?));
        }
    }
    Ok(DiscreteProblem::Ladder { layer, outer })
}

/// Diagonal-form coefficients `κ_k^{q/p} H_k^q`, with `H_k` the local
/// embedding constant of the ladder cell `(x_{k-1}, x_k)`.
pub fn cell_problem<R: Real>(
    params: &ParamTriple<R>,
    u: &Weight<R>,
    v: &Weight<R>,
    seq: &DiscretizingSequence<R>,
    quad: &Quadrature<R>,
) -> Result<DiscreteProblem<R>> {
    params.validate()?;
    let ParamTriple { p, q, r } = *params;
    let lo = seq.k_lo() + 1;
    let hi = seq.k_hi();
    let mut diag = Vec::new();
    if lo <= hi {
        let e = q / p;
        for k in lo..=hi {
            let h = flat(compute_h(u, v, r, q, seq.x(k - 1), seq.x(k), quad)?);
            diag.push(xmul(xpow(seq.kappa(k), e), xpow(h, q)));
        }
    }
    Ok(DiscreteProblem::Cell { diag })
}
