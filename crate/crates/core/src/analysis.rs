//! Analytical ergodic capacities and the ergodic secrecy sum-rate lower
//! bound.
//!
//! The strong user's ergodic capacity and the eavesdropping capacity on the
//! strong user's message have closed forms in the exponential integral; the
//! weak user's capacity and the upper bound on its eavesdropping capacity
//! are finite-support integrals evaluated by adaptive quadrature. Each
//! closed form has a removable singularity (equal decay rates, or
//! self-interference scale matching the loopback rate), handled by a
//! quadrature or Gamma-distribution fallback behind a relative switch
//! threshold.
//!
//! All capacities are in bits/s/Hz.

use std::f64::consts::LN_2;

use crate::error::Error;
use crate::numerics::{
    exp_integral_e1_scaled, quad_finite_with_breakpoints, quad_semi_infinite, DEFAULT_QUAD_REL_TOL,
};
use crate::params::SystemParams;
use crate::sinr::log2_1p;
use crate::Result;

/// Exponential rates and derived constants for one configuration.
///
/// `pi_*` are the decay rates of the allocated-power SINR components
/// (`1 / (a rho sigma^2)`), `lambda_*` the reciprocal channel variances.
/// `s = pi_sr + pi_rd1` is the effective decay rate of the strong user's
/// SINR, `beta = rho_si * pi_sr` the self-interference scale entering its
/// distribution, and `c1 = 1/s`, `c2 = beta / (lambda_rr * s)` the constants
/// of the closed form (whose exponential-integral arguments are `1/c1` and
/// `1/c2`).
#[derive(Debug, Clone, Copy)]
pub struct RateParams {
    pub pi_sr: f64,
    pub pi_rd1: f64,
    pub pi_se: f64,
    pub pi_re: f64,
    pub lambda_sr: f64,
    pub lambda_rd1: f64,
    pub lambda_rd2: f64,
    pub lambda_rr: f64,
    pub lambda_se: f64,
    pub lambda_re: f64,
    pub s: f64,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
    pub a_min: f64,
}

impl RateParams {
    pub fn new(params: &SystemParams) -> Self {
        let p = &params.profile;
        let pi_sr = 1.0 / (params.a_s * params.rho * p.var_sr);
        let pi_rd1 = 1.0 / (params.a_r * params.rho * p.var_rd1);
        let pi_se = 1.0 / (params.a_s * params.rho * p.var_se);
        let pi_re = 1.0 / (params.a_r * params.rho * p.var_re);
        let lambda_rr = 1.0 / p.var_si;
        let s = pi_sr + pi_rd1;
        // An unallocated user makes pi_sr infinite; keep beta and c2 free of
        // 0 * inf artifacts so downstream guards see clean values.
        let beta = if params.rho_si == 0.0 {
            0.0
        } else {
            params.rho_si * pi_sr
        };
        let c2 = if s.is_finite() && beta.is_finite() {
            beta / (lambda_rr * s)
        } else {
            0.0
        };
        RateParams {
            pi_sr,
            pi_rd1,
            pi_se,
            pi_re,
            lambda_sr: 1.0 / p.var_sr,
            lambda_rd1: 1.0 / p.var_rd1,
            lambda_rd2: 1.0 / p.var_rd2,
            lambda_rr,
            lambda_se: 1.0 / p.var_se,
            lambda_re: 1.0 / p.var_re,
            s,
            beta,
            c1: 1.0 / s,
            c2,
            a_min: params.a_s.min(params.a_r),
        }
    }
}

/// Theorem-level quantities for one configuration.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticalReport {
    pub c_d1: f64,
    pub c_d2: f64,
    pub ce_d1: f64,
    pub ce_d2_ub: f64,
    pub sec_lb: f64,
}

/// Guard width for the integrable endpoint factors `1 - a - a x`.
const DENOM_CLAMP: f64 = 1e-12;
/// Relative width of the removable-singularity fallback branches.
const DEGENERATE_REL: f64 = 1e-6;
/// Initial panel boundaries for the rescaled capacity integrals. The
/// rescaled survival decays at least like exp(-u), so everything beyond the
/// last breakpoint is far below the quadrature tolerance; the early panels
/// guarantee the near-origin mass lands on quadrature nodes even when the
/// support edge is many orders of magnitude away.
const RESCALED_BREAKPOINTS: [f64; 4] = [1.0, 4.0, 16.0, 64.0];

/// c.d.f. of the strong user's effective SINR:
/// `F(x) = 1 - lambda_rr exp(-s x) / (rho_si pi_sr x + lambda_rr)`.
pub fn cdf_eff_d1(x: f64, rp: &RateParams, rho_si: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let beta = if rho_si == 0.0 {
        0.0
    } else {
        rho_si * rp.pi_sr
    };
    1.0 - rp.lambda_rr * (-rp.s * x).exp() / (beta * x + rp.lambda_rr)
}

/// Largest SINR either power split can produce; both weak-user c.d.f.s
/// saturate there.
fn support_limit(a_s: f64, a_r: f64) -> f64 {
    let from = |a: f64| {
        if a > 0.0 {
            (1.0 - a) / a
        } else {
            f64::INFINITY
        }
    };
    from(a_s).min(from(a_r))
}

/// Survival function of the weak user's effective SINR, computed directly:
/// the capacity integrands need it far below machine epsilon, where
/// `1 - cdf` would cancel to zero.
pub fn survival_eff_d2(x: f64, rp: &RateParams, params: &SystemParams) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x >= support_limit(params.a_s, params.a_r) {
        return 0.0;
    }
    let den_s = (1.0 - params.a_s - params.a_s * x).max(DENOM_CLAMP) * params.rho;
    let den_r = (1.0 - params.a_r - params.a_r * x).max(DENOM_CLAMP) * params.rho;
    let source_leg = (-rp.lambda_sr * x / den_s).exp();
    let relay_leg = (-(rp.lambda_rd1 + rp.lambda_rd2) * x / den_r).exp();
    let si_factor = 1.0 + rp.lambda_sr * params.rho_si * x / (rp.lambda_rr * den_s);
    source_leg * relay_leg / si_factor
}

/// c.d.f. of the weak user's effective SINR; saturates to one at the finite
/// support edge `min((1-a_s)/a_s, (1-a_r)/a_r)`.
pub fn cdf_eff_d2(x: f64, rp: &RateParams, params: &SystemParams) -> f64 {
    1.0 - survival_eff_d2(x, rp, params)
}

/// Unwrap a quadrature result, accepting the best estimate on
/// non-convergence (used only where the operation contract admits no error).
fn quad_or_best(r: Result<f64>) -> f64 {
    match r {
        Ok(v) => v,
        Err(Error::QuadratureFailure { estimate, .. }) => estimate,
        Err(_) => 0.0,
    }
}

/// Ergodic capacity of the strong user (closed form).
///
/// `C = lambda_rr / ((lambda_rr - beta) ln 2) [e^s E1(s) - e^(lambda_rr
/// s/beta) E1(lambda_rr s/beta)]`, with a plain `e^s E1(s) / ln 2` branch
/// when there is no self-interference and a quadrature fallback at the
/// removable singularity `beta ~ lambda_rr`.
pub fn ergodic_capacity_d1(rp: &RateParams, rho_si: f64) -> f64 {
    if !rp.s.is_finite() {
        return 0.0; // zero allocated power on a decoding stage
    }
    let s = rp.s;
    let lam = rp.lambda_rr;
    let beta = if rho_si == 0.0 {
        0.0
    } else {
        rho_si * rp.pi_sr
    };
    if beta == 0.0 {
        return exp_integral_e1_scaled(s).expect("s > 0") / LN_2;
    }
    if (lam - beta).abs() < 1e-9 * lam {
        // Removable singularity: integrate the survival function instead,
        // rescaled by u = s x so the decay is O(1) for any s.
        return quad_or_best(quad_semi_infinite(
            |u| {
                let x = u / s;
                lam * (-u).exp() / ((1.0 + x) * (lam + beta * x) * s * LN_2)
            },
            DEFAULT_QUAD_REL_TOL,
        ));
    }
    let head = exp_integral_e1_scaled(s).expect("s > 0");
    let tail = exp_integral_e1_scaled(lam * s / beta).expect("argument > 0");
    lam / ((lam - beta) * LN_2) * (head - tail)
}

/// Ergodic capacity of the weak user: `(1/ln 2) int_0^xmax (1 - F(x)) /
/// (1 + x) dx` by adaptive quadrature over the finite support.
///
/// The integration variable is rescaled by the survival function's decay
/// rate at the origin; at low transmit SNR the whole mass sits within a
/// sliver of the support and would otherwise fall between quadrature nodes.
pub fn ergodic_capacity_d2(rp: &RateParams, params: &SystemParams) -> Result<f64> {
    let x_max = support_limit(params.a_s, params.a_r);
    let scale = rp.lambda_sr / ((1.0 - params.a_s) * params.rho)
        + (rp.lambda_rd1 + rp.lambda_rd2) / ((1.0 - params.a_r) * params.rho);
    let integrand = |u: f64| {
        let x = u / scale;
        survival_eff_d2(x, rp, params) / ((1.0 + x) * scale * LN_2)
    };
    let u_max = scale * x_max;
    if u_max.is_finite() {
        quad_finite_with_breakpoints(
            integrand,
            0.0,
            u_max,
            DEFAULT_QUAD_REL_TOL,
            &RESCALED_BREAKPOINTS,
        )
    } else {
        quad_semi_infinite(integrand, DEFAULT_QUAD_REL_TOL)
    }
}

/// Ergodic eavesdropping capacity on the strong user's message.
///
/// The eavesdropper's SINR is a sum of two independent exponentials with
/// rates `pi_se`, `pi_re`; equal rates degenerate to a Gamma(2)
/// expectation, evaluated by quadrature against the density.
pub fn ergodic_eve_capacity_d1(rp: &RateParams) -> f64 {
    let (p, q) = (rp.pi_se, rp.pi_re);
    if !p.is_finite() || !q.is_finite() {
        return 0.0;
    }
    if (p - q).abs() < DEGENERATE_REL * p.max(q) {
        // Gamma(2, rate) expectation of log2(1 + x), rescaled by u = rate x.
        let rate = 0.5 * (p + q);
        return quad_or_best(quad_semi_infinite(
            |u| log2_1p(u / rate) * u * (-u).exp(),
            DEFAULT_QUAD_REL_TOL,
        ));
    }
    (q * exp_integral_e1_scaled(p).expect("pi_se > 0")
        - p * exp_integral_e1_scaled(q).expect("pi_re > 0"))
        / ((q - p) * LN_2)
}

/// Upper bound on the ergodic eavesdropping capacity of the weak user.
///
/// Bounds the eavesdropper's SINR by the single-split form with
/// `a = min(a_s, a_r)`; the bound's survival function is hypoexponential in
/// `|h_se|^2 + |h_re|^2` evaluated at `w(x) = x / ((1 - a - a x) rho)`.
pub fn ergodic_eve_capacity_d2_ub(rp: &RateParams, params: &SystemParams) -> Result<f64> {
    let a = rp.a_min;
    let rho = params.rho;
    let (ls, lr) = (rp.lambda_se, rp.lambda_re);
    let degenerate = (lr - ls).abs() < DEGENERATE_REL * ls.max(lr);
    let lam_common = 0.5 * (ls + lr);
    // Rescale so the bound's survival decays at least like exp(-u): the
    // hypoexponential tail rate is the smaller of the two decay rates.
    let scale = ls.min(lr) / ((1.0 - a) * rho);
    let integrand = move |u: f64| {
        let x = u / scale;
        let w = x / ((1.0 - a - a * x).max(DENOM_CLAMP) * rho);
        let survival = if degenerate {
            (1.0 + lam_common * w) * (-lam_common * w).exp()
        } else {
            (lr * (-ls * w).exp() - ls * (-lr * w).exp()) / (lr - ls)
        };
        survival / ((1.0 + x) * scale * LN_2)
    };
    let x_max = if a > 0.0 {
        (1.0 - a) / a
    } else {
        f64::INFINITY
    };
    let u_max = scale * x_max;
    if u_max.is_finite() {
        quad_finite_with_breakpoints(
            integrand,
            0.0,
            u_max,
            DEFAULT_QUAD_REL_TOL,
            &RESCALED_BREAKPOINTS,
        )
    } else {
        quad_semi_infinite(integrand, DEFAULT_QUAD_REL_TOL)
    }
}

/// Clipped per-user differences summed: the secrecy sum-rate lower bound.
pub fn secrecy_lower_bound(c_d1: f64, c_d2: f64, ce_d1: f64, ce_d2_ub: f64) -> f64 {
    (c_d1 - ce_d1).max(0.0) + (c_d2 - ce_d2_ub).max(0.0)
}

/// Evaluate every analytical quantity for one configuration.
pub fn analytical_report(params: &SystemParams) -> Result<AnalyticalReport> {
    let rp = RateParams::new(params);
    let c_d1 = ergodic_capacity_d1(&rp, params.rho_si);
    let c_d2 = ergodic_capacity_d2(&rp, params)?;
    let ce_d1 = ergodic_eve_capacity_d1(&rp);
    let ce_d2_ub = ergodic_eve_capacity_d2_ub(&rp, params)?;
    Ok(AnalyticalReport {
        c_d1,
        c_d2,
        ce_d1,
        ce_d2_ub,
        sec_lb: secrecy_lower_bound(c_d1, c_d2, ce_d1, ce_d2_ub),
    })
}
