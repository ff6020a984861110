//! Special functions and quadrature used by the ergodic-capacity formulas:
//! the exponential integral E1 and adaptive Gauss-Kronrod integration on
//! finite and semi-infinite intervals.

use crate::error::Error;
use crate::Result;

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral `E1(z) = int_z^inf exp(-t)/t dt` for `z > 0`.
///
/// Power series below one, modified Lentz continued fraction above; the two
/// branches agree to better than 1e-12 at the switchover. Underflows to
/// zero for very large arguments.
pub fn exp_integral_e1(z: f64) -> Result<f64> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::Domain(format!(
            "exp_integral_e1 requires z > 0 (got {z})"
        )));
    }
    if z <= 1.0 {
        Ok(e1_series(z))
    } else {
        Ok((-z).exp() * e1_cf_scaled(z))
    }
}

/// Scaled exponential integral `exp(z) * E1(z)`, safe from overflow for any
/// positive argument. The capacity formulas use this form exclusively: the
/// unscaled `E1` underflows long before the products they need do.
pub fn exp_integral_e1_scaled(z: f64) -> Result<f64> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::Domain(format!(
            "exp_integral_e1_scaled requires z > 0 (got {z})"
        )));
    }
    if z <= 1.0 {
        Ok(z.exp() * e1_series(z))
    } else {
        Ok(e1_cf_scaled(z))
    }
}

/// Alternating series -gamma - ln z + sum (-1)^{k+1} z^k / (k k!), accurate
/// for z <= 1.
fn e1_series(z: f64) -> f64 {
    let mut sum = -EULER_GAMMA - z.ln();
    let mut term = 1.0;
    for k in 1..=60 {
        let kf = k as f64;
        term *= -z / kf;
        let contribution = -term / kf;
        sum += contribution;
        if contribution.abs() <= sum.abs() * 1e-18 {
            break;
        }
    }
    sum
}

/// Continued fraction for exp(z) * E1(z), z >= 1, by the modified Lentz
/// algorithm:
///   E1(z) = exp(-z) / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(...))))
fn e1_cf_scaled(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for k in 1..200 {
        let kf = k as f64;
        let a = -kf * kf;
        b += 2.0;
        d = b + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h
}

/// Default relative tolerance for the adaptive quadratures.
pub const DEFAULT_QUAD_REL_TOL: f64 = 1e-8;

const MAX_SUBDIVISIONS: usize = 4000;

/// 15-point Gauss-Kronrod nodes (positive half) and weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One Gauss-Kronrod 15(7) pass over [lo, hi]: returns (estimate, error).
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = 0.0;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let fsum = f1 + f2;
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    gauss += WG[3] * fc;
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive integral of `f` over the finite interval `(lo, hi)` to relative
/// tolerance `rel_tol` (worst-interval-first bisection of GK15 panels).
///
/// Endpoints are never evaluated, so integrable endpoint behavior is fine.
/// Non-convergence reports the best estimate in the error.
pub fn quad_finite<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    quad_finite_with_breakpoints(f, lo, hi, rel_tol, &[])
}

/// [`quad_finite`] with caller-supplied initial panel boundaries.
///
/// Breakpoints outside `(lo, hi)` are ignored. Use them when the integrand
/// has known narrow features: a panel whose nodes all miss the feature
/// reports zero error and would never be refined.
pub fn quad_finite_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    breakpoints: &[f64],
) -> Result<f64> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::Domain(format!(
            "quadrature interval is empty: [{lo}, {hi}]"
        )));
    }
    let mut edges = vec![lo];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|b| *b > lo && *b < hi)
        .collect();
    inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
    inner.dedup();
    edges.extend(inner);
    edges.push(hi);
    // (error, lo, hi, estimate); f64 ordering is total here because error
    // estimates of GK panels are finite and nonnegative.
    let mut intervals = Vec::with_capacity(edges.len() - 1);
    let mut total_est = 0.0;
    let mut total_err = 0.0;
    for pair in edges.windows(2) {
        let (est, err) = gk15(&f, pair[0], pair[1]);
        total_est += est;
        total_err += err;
        intervals.push((err, pair[0], pair[1], est));
    }
    let tol = |estimate: f64| (rel_tol * estimate.abs()).max(f64::MIN_POSITIVE * 64.0);
    while total_err > tol(total_est) && intervals.len() < MAX_SUBDIVISIONS {
        // Pop the interval with the largest error estimate.
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .0.partial_cmp(&b.1 .0).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let (e, a, b, v) = intervals.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // Interval collapsed to machine precision; keep its estimate.
            intervals.push((0.0, a, b, v));
            continue;
        }
        let (v1, e1) = gk15(&f, a, mid);
        let (v2, e2) = gk15(&f, mid, b);
        if !(v1 + v2).is_finite() || !(e1 + e2).is_finite() {
            // The integrand blew up inside this panel; report the last
            // finite estimate rather than poisoning the running totals.
            return Err(Error::QuadratureFailure {
                estimate: total_est,
                error_bound: total_err,
            });
        }
        total_est += v1 + v2 - v;
        total_err += e1 + e2 - e;
        intervals.push((e1, a, mid, v1));
        intervals.push((e2, mid, b, v2));
    }
    if total_err > tol(total_est) {
        return Err(Error::QuadratureFailure {
            estimate: total_est,
            error_bound: total_err,
        });
    }
    Ok(total_est)
}

/// Adaptive integral of `f` over `(0, inf)` via the substitution
/// `x = t / (1 - t)` mapped onto [`quad_finite`] on `(0, 1)`.
pub fn quad_semi_infinite<F: Fn(f64) -> f64>(f: F, rel_tol: f64) -> Result<f64> {
    quad_finite(
        move |t| {
            let one_minus = 1.0 - t;
            let x = t / one_minus;
            let jac = 1.0 / (one_minus * one_minus);
            let v = f(x) * jac;
            // Decaying integrands underflow cleanly; anything non-finite
            // out here is treated as already-zero tail.
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        rel_tol,
    )
}
