//! Per-realization secrecy sum-rate maximization over the two power
//! allocation parameters.
//!
//! For a fixed channel realization every rate difference is a difference of
//! concave functions of `(a_s, a_r)`. Each outer iteration replaces the
//! subtracted concave terms by their tangents at the current anchor, which
//! leaves five concave constraints; the tangent of a concave function lies
//! above it, so every surrogate constraint under-estimates its true rate
//! difference and the iteration ascends monotonically in the true
//! objective.
//!
//! The two-variable surrogate subproblem is solved by maximizing three
//! concave functions (each user's surrogate value alone, and the penalized
//! both-users-active sum) with nested golden-section search, then taking
//! the best of those candidates and the anchor under the clipped surrogate
//! objective. The clipped maximum is always attained at one of them: where
//! both users are active it equals the constrained sum, and where only one
//! is, that user's unconstrained maximizer already achieves it.

use std::f64::consts::LN_2;

use crate::channel::{aux_uniform, ChannelRealization};
use crate::params::SystemParams;
use crate::sinr::log2_1p;

/// Fixed power allocation baseline point.
pub const FPAPT_ALLOCATION: (f64, f64) = (0.2, 0.2);
/// Default stopping tolerance on both allocation deltas.
pub const DEFAULT_EPS: f64 = 1e-4;
/// Default iteration cap per start.
pub const DEFAULT_MAX_ITER: usize = 50;
/// Default number of random starts (the fixed baseline point is always
/// added on top).
pub const DEFAULT_RANDOM_STARTS: usize = 4;

/// Channel-dependent constants of the rate expressions for one realization:
/// `a = rho g_sr`, `b = rho_si g_si + 1`, `e1 = rho g_rd1`,
/// `e2 = rho g_rd2`, `c = rho g_se`, `d = rho g_re`.
#[derive(Debug, Clone, Copy)]
pub struct DcCoefficients {
    pub a: f64,
    pub b: f64,
    pub e1: f64,
    pub e2: f64,
    pub c: f64,
    pub d: f64,
}

impl DcCoefficients {
    /// Precompute the coefficients from a realization. Power allocation
    /// plays no role here; it is the optimization variable.
    pub fn from_realization(rho: f64, rho_si: f64, ch: &ChannelRealization) -> Self {
        DcCoefficients {
            a: rho * ch.g_sr,
            b: rho_si * ch.g_si + 1.0,
            e1: rho * ch.g_rd1,
            e2: rho * ch.g_rd2,
            c: rho * ch.g_se,
            d: rho * ch.g_re,
        }
    }

    /// Convenience wrapper reading `rho` and `rho_si` from system params.
    pub fn from_params(params: &SystemParams, ch: &ChannelRealization) -> Self {
        Self::from_realization(params.rho, params.rho_si, ch)
    }

    // Concave building blocks (logs base 2). The surrogate keeps some of
    // these and linearizes the rest; the true rate differences below are
    // assembled from the same primitives so that the surrogate is exactly
    // tangent at its anchor.

    /// log2(1 + a_s A / B): strong user's rate through the relay hop.
    fn psi1(&self, a_s: f64) -> f64 {
        log2_1p(a_s * self.a / self.b)
    }

    /// log2(1 + a_r E1): strong user's rate at its own receiver.
    fn pi1(&self, a_r: f64) -> f64 {
        log2_1p(a_r * self.e1)
    }

    /// log2(1 + a_s C + a_r D): eavesdropper term shared by every branch.
    fn g_eve(&self, a_s: f64, a_r: f64) -> f64 {
        log2_1p(a_s * self.c + a_r * self.d)
    }

    /// log2(a_s A + B): subtracted term of the weak user's relay branch.
    fn g_sr(&self, a_s: f64) -> f64 {
        (a_s * self.a + self.b).log2()
    }

    /// log2(1 + a_r E2): subtracted term of the weak user's own branch.
    fn g_own2(&self, a_r: f64) -> f64 {
        log2_1p(a_r * self.e2)
    }

    /// log2(1 + a_r E1): subtracted term of the cancellation branch.
    fn g_own1(&self, a_r: f64) -> f64 {
        log2_1p(a_r * self.e1)
    }

    fn kappa_psi(&self) -> f64 {
        (self.a + self.b).log2() - log2_1p(self.c + self.d)
    }

    fn kappa_pi(&self) -> f64 {
        log2_1p(self.e2) - log2_1p(self.c + self.d)
    }

    fn kappa_theta(&self) -> f64 {
        log2_1p(self.e1) - log2_1p(self.c + self.d)
    }

    /// The five true rate differences (strong user: two branches, weak
    /// user: three).
    fn diffs(&self, a_s: f64, a_r: f64) -> ([f64; 2], [f64; 3]) {
        let ge = self.g_eve(a_s, a_r);
        (
            [self.psi1(a_s) - ge, self.pi1(a_r) - ge],
            [
                self.kappa_psi() + ge - self.g_sr(a_s),
                self.kappa_pi() + ge - self.g_own2(a_r),
                self.kappa_theta() + ge - self.g_own1(a_r),
            ],
        )
    }

    /// Instantaneous secrecy sum rate at an allocation pair: per-user
    /// clipped minimum over the decoding branches.
    pub fn true_ssr(&self, a_s: f64, a_r: f64) -> f64 {
        let (d1, d2) = self.diffs(a_s, a_r);
        d1[0].min(d1[1]).max(0.0) + d2[0].min(d2[1]).min(d2[2]).max(0.0)
    }
}

/// Value and gradient of a concave term at the anchor; evaluating the
/// tangent anywhere over-estimates the term.
#[derive(Debug, Clone, Copy)]
pub struct Tangent {
    pub value: f64,
    pub grad_a_s: f64,
    pub grad_a_r: f64,
}

impl Tangent {
    fn eval(&self, anchor: (f64, f64), a_s: f64, a_r: f64) -> f64 {
        self.value + self.grad_a_s * (a_s - anchor.0) + self.grad_a_r * (a_r - anchor.1)
    }
}

/// The convex surrogate of one outer iteration: anchor plus tangents of the
/// four distinct subtracted concave terms.
#[derive(Debug, Clone)]
pub struct SurrogateModel {
    pub anchor: (f64, f64),
    pub coeffs: DcCoefficients,
    /// Tangent of the shared eavesdropper term (subtracted in both strong
    /// user branches).
    pub t_eve: Tangent,
    /// Tangent of log2(a_s A + B).
    pub t_sr: Tangent,
    /// Tangent of log2(1 + a_r E2).
    pub t_own2: Tangent,
    /// Tangent of log2(1 + a_r E1).
    pub t_own1: Tangent,
}

/// Build the tangents of the subtracted concave terms at `anchor`.
pub fn build_surrogate(coeffs: &DcCoefficients, anchor: (f64, f64)) -> SurrogateModel {
    let (a_s, a_r) = anchor;
    // d/dx log2(u(x)) = u'(x) / (u(x) ln 2) for affine u.
    let u_eve = 1.0 + a_s * coeffs.c + a_r * coeffs.d;
    let t_eve = Tangent {
        value: coeffs.g_eve(a_s, a_r),
        grad_a_s: coeffs.c / (u_eve * LN_2),
        grad_a_r: coeffs.d / (u_eve * LN_2),
    };
    let u_sr = a_s * coeffs.a + coeffs.b;
    let t_sr = Tangent {
        value: coeffs.g_sr(a_s),
        grad_a_s: coeffs.a / (u_sr * LN_2),
        grad_a_r: 0.0,
    };
    let u_own2 = 1.0 + a_r * coeffs.e2;
    let t_own2 = Tangent {
        value: coeffs.g_own2(a_r),
        grad_a_s: 0.0,
        grad_a_r: coeffs.e2 / (u_own2 * LN_2),
    };
    let u_own1 = 1.0 + a_r * coeffs.e1;
    let t_own1 = Tangent {
        value: coeffs.g_own1(a_r),
        grad_a_s: 0.0,
        grad_a_r: coeffs.e1 / (u_own1 * LN_2),
    };
    SurrogateModel {
        anchor,
        coeffs: *coeffs,
        t_eve,
        t_sr,
        t_own2,
        t_own1,
    }
}

impl SurrogateModel {
    /// The five surrogate constraint right-hand sides at an allocation.
    pub fn constraint_rhs(&self, a_s: f64, a_r: f64) -> ([f64; 2], [f64; 3]) {
        let co = &self.coeffs;
        let te = self.t_eve.eval(self.anchor, a_s, a_r);
        let ge = co.g_eve(a_s, a_r);
        (
            [co.psi1(a_s) - te, co.pi1(a_r) - te],
            [
                co.kappa_psi() + ge - self.t_sr.eval(self.anchor, a_s, a_r),
                co.kappa_pi() + ge - self.t_own2.eval(self.anchor, a_s, a_r),
                co.kappa_theta() + ge - self.t_own1.eval(self.anchor, a_s, a_r),
            ],
        )
    }

    /// Concave surrogate value of the strong user: min over its branches.
    fn user1(&self, a_s: f64, a_r: f64) -> f64 {
        let (d1, _) = self.constraint_rhs(a_s, a_r);
        d1[0].min(d1[1])
    }

    /// Concave surrogate value of the weak user.
    fn user2(&self, a_s: f64, a_r: f64) -> f64 {
        let (_, d2) = self.constraint_rhs(a_s, a_r);
        d2[0].min(d2[1]).min(d2[2])
    }

    /// Clipped surrogate objective `t1 + t2` with the auxiliary variables
    /// at their pointwise optimum `t_i = [min_i rhs]^+`.
    pub fn objective(&self, a_s: f64, a_r: f64) -> f64 {
        self.user1(a_s, a_r).max(0.0) + self.user2(a_s, a_r).max(0.0)
    }

    /// Unclipped branch-minimum sum, kept as a diagnostic.
    pub fn unclipped_objective(&self, a_s: f64, a_r: f64) -> f64 {
        self.user1(a_s, a_r) + self.user2(a_s, a_r)
    }
}

/// Golden-section maximum of a concave function on [lo, hi].
fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut lo = lo;
    let mut hi = hi;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Accuracy of the inner allocation search (allocation units).
const SEARCH_TOL: f64 = 1e-5;

/// Nested golden-section maximum of a jointly concave function over the
/// allocation box; the partial maximum over one variable is itself concave
/// in the other.
fn maximize_concave_2d(f: impl Fn(f64, f64) -> f64) -> (f64, f64) {
    let inner = |a_s: f64| golden_max(|a_r| f(a_s, a_r), 0.0, 0.5, SEARCH_TOL);
    let (a_s, _) = golden_max(|a_s| inner(a_s).1, 0.0, 0.5, SEARCH_TOL);
    let (a_r, _) = golden_max(|a_r| f(a_s, a_r), 0.0, 0.5, SEARCH_TOL);
    (a_s, a_r)
}

/// A feasible subproblem solution: allocation plus the optimal auxiliary
/// variables.
#[derive(Debug, Clone, Copy)]
pub struct SubproblemSolution {
    pub a_s: f64,
    pub a_r: f64,
    pub t1: f64,
    pub t2: f64,
}

impl SubproblemSolution {
    pub fn objective(&self) -> f64 {
        self.t1 + self.t2
    }
}

/// Exact-penalty weight for the both-users-active candidate.
const PENALTY: f64 = 1e6;

/// Maximize the clipped surrogate objective over the allocation box.
///
/// Candidates: the anchor (never worse than staying put), each user's
/// unconstrained concave maximizer, and the penalized maximizer of the
/// active-sum. The best one under the clipped objective attains the global
/// maximum up to the line-search tolerance.
pub fn solve_subproblem(model: &SurrogateModel) -> SubproblemSolution {
    let g1 = |a_s: f64, a_r: f64| model.user1(a_s, a_r);
    let g2 = |a_s: f64, a_r: f64| model.user2(a_s, a_r);
    let both = |a_s: f64, a_r: f64| {
        let v1 = g1(a_s, a_r);
        let v2 = g2(a_s, a_r);
        v1 + v2 + PENALTY * (v1.min(0.0) + v2.min(0.0))
    };
    // Searched maximizers stop within the line-search tolerance of the box
    // edges; offer the exactly-snapped variants as extra candidates so
    // boundary optima come out exact.
    let snap = |a: f64| {
        if a < 2.0 * SEARCH_TOL {
            0.0
        } else if a > 0.5 - 2.0 * SEARCH_TOL {
            0.5
        } else {
            a
        }
    };
    let mut candidates = vec![model.anchor];
    for point in [
        maximize_concave_2d(g1),
        maximize_concave_2d(g2),
        maximize_concave_2d(both),
    ] {
        candidates.push(point);
        let snapped = (snap(point.0), snap(point.1));
        if snapped != point {
            candidates.push(snapped);
        }
    }
    let mut best = candidates[0];
    let mut best_value = model.objective(best.0, best.1);
    for cand in &candidates[1..] {
        let value = model.objective(cand.0, cand.1);
        if value > best_value {
            best = *cand;
            best_value = value;
        }
    }
    SubproblemSolution {
        a_s: best.0,
        a_r: best.1,
        t1: model.user1(best.0, best.1).max(0.0),
        t2: model.user2(best.0, best.1).max(0.0),
    }
}

/// One recorded outer iteration.
#[derive(Debug, Clone, Copy)]
pub struct ScaIterate {
    pub iteration: usize,
    pub a_s: f64,
    pub a_r: f64,
    /// Clipped surrogate objective t1 + t2 of the subproblem solution.
    pub surrogate_objective: f64,
    /// Unclipped branch-minimum sum (diagnostic).
    pub unclipped_objective: f64,
    /// True secrecy sum rate at this iterate.
    pub true_ssr: f64,
    /// max(|delta a_s|, |delta a_r|) from the previous iterate.
    pub step_norm: f64,
}

/// Full record of one multi-start optimization (the best start's
/// iterations).
#[derive(Debug, Clone)]
pub struct OptimizerTrace {
    pub iterates: Vec<ScaIterate>,
    pub best_a_s: f64,
    pub best_a_r: f64,
    pub best_ssr: f64,
    pub converged: bool,
}

fn clamp_allocation(a: f64) -> f64 {
    a.clamp(0.0, 0.5)
}

/// One successive-convex-approximation run from a single start: linearize
/// at the anchor, solve the surrogate, move, repeat until both allocation
/// deltas fall below `eps` or the iteration cap is hit.
pub fn sca_run(
    coeffs: &DcCoefficients,
    start: (f64, f64),
    eps: f64,
    max_iter: usize,
) -> OptimizerTrace {
    assert!(eps > 0.0, "tolerance must be positive");
    let mut anchor = (clamp_allocation(start.0), clamp_allocation(start.1));
    let start_model = build_surrogate(coeffs, anchor);
    let mut iterates = vec![ScaIterate {
        iteration: 0,
        a_s: anchor.0,
        a_r: anchor.1,
        surrogate_objective: start_model.objective(anchor.0, anchor.1),
        unclipped_objective: start_model.unclipped_objective(anchor.0, anchor.1),
        true_ssr: coeffs.true_ssr(anchor.0, anchor.1),
        step_norm: 0.0,
    }];
    let mut converged = false;
    for l in 1..=max_iter {
        let model = build_surrogate(coeffs, anchor);
        let sol = solve_subproblem(&model);
        let step_s = (sol.a_s - anchor.0).abs();
        let step_r = (sol.a_r - anchor.1).abs();
        iterates.push(ScaIterate {
            iteration: l,
            a_s: sol.a_s,
            a_r: sol.a_r,
            surrogate_objective: sol.objective(),
            unclipped_objective: model.unclipped_objective(sol.a_s, sol.a_r),
            true_ssr: coeffs.true_ssr(sol.a_s, sol.a_r),
            step_norm: step_s.max(step_r),
        });
        anchor = (sol.a_s, sol.a_r);
        if step_s < eps && step_r < eps {
            converged = true;
            break;
        }
    }
    let best = iterates
        .iter()
        .max_by(|a, b| a.true_ssr.partial_cmp(&b.true_ssr).unwrap())
        .copied()
        .expect("at least the start iterate exists");
    OptimizerTrace {
        iterates,
        best_a_s: best.a_s,
        best_a_r: best.a_r,
        best_ssr: best.true_ssr,
        converged,
    }
}

/// Multi-start optimization. The fixed baseline allocation is always
/// appended to the start list, so the result can never fall below the
/// baseline's secrecy sum rate; the trace of the best start is returned.
pub fn sca_optimize(
    coeffs: &DcCoefficients,
    eps: f64,
    max_iter: usize,
    starts: &[(f64, f64)],
) -> OptimizerTrace {
    let mut best: Option<OptimizerTrace> = None;
    for start in starts.iter().copied().chain([FPAPT_ALLOCATION]) {
        let trace = sca_run(coeffs, start, eps, max_iter);
        let better = match &best {
            None => true,
            Some(b) => trace.best_ssr > b.best_ssr,
        };
        if better {
            best = Some(trace);
        }
    }
    best.expect("start list is never empty")
}

/// Deterministic random starts in the allocation box, derived from the
/// auxiliary substream of `seed` so they never collide with channel draws.
pub fn random_starts(seed: u64, count: usize) -> Vec<(f64, f64)> {
    (0..count as u64)
        .map(|i| {
            (
                0.5 * aux_uniform(seed, 1, 2 * i),
                0.5 * aux_uniform(seed, 1, 2 * i + 1),
            )
        })
        .collect()
}

/// Brute-force argmax of the true secrecy sum rate on a regular grid over
/// the allocation box (verification oracle).
pub fn grid_oracle(coeffs: &DcCoefficients, step: f64) -> (f64, f64, f64) {
    assert!(step > 0.0 && step <= 0.01, "grid step must be in (0, 0.01]");
    let count = (0.5 / step + 1e-9).floor() as usize;
    let grid: Vec<f64> = (0..=count).map(|i| (i as f64 * step).min(0.5)).collect();
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for &a_s in &grid {
        for &a_r in &grid {
            let v = coeffs.true_ssr(a_s, a_r);
            if v > best.2 {
                best = (a_s, a_r, v);
            }
        }
    }
    best
}

/// Secrecy sum rate of the fixed-allocation baseline.
pub fn fpapt_baseline(coeffs: &DcCoefficients) -> f64 {
    coeffs.true_ssr(FPAPT_ALLOCATION.0, FPAPT_ALLOCATION.1)
}
