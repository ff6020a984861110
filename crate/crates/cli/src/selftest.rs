//! Built-in verification checks: quick, self-contained versions of the
//! oracle suites, suitable for a post-install sanity run.

use fdnoma::analysis::{analytical_report, RateParams};
use fdnoma::channel::{aux_uniform, sample_realization};
use fdnoma::figures::{run_figure, Overrides};
use fdnoma::mc::estimate_ergodic_terms;
use fdnoma::numerics::{exp_integral_e1, quad_finite, quad_semi_infinite};
use fdnoma::optimizer::{
    build_surrogate, fpapt_baseline, sca_run, DcCoefficients, DEFAULT_EPS, DEFAULT_MAX_ITER,
    FPAPT_ALLOCATION,
};
use fdnoma::scenario::Scenario;
use fdnoma::sinr::instantaneous_secrecy;

type Check = (&'static str, fn() -> Result<String, String>);

/// Independent exponential-integral evaluation (series below one,
/// fixed-depth downward continued fraction above).
fn oracle_e1(z: f64) -> f64 {
    if z <= 1.0 {
        let gamma = 0.577_215_664_901_532_9;
        let mut sum = -gamma - z.ln();
        let mut power = 1.0;
        let mut factorial = 1.0;
        for k in 1..=200u32 {
            let kf = k as f64;
            power *= z;
            factorial *= kf;
            sum += if k % 2 == 1 { 1.0 } else { -1.0 } * power / (kf * factorial);
        }
        sum
    } else {
        let depth = ((120.0 / z) as usize) + 30;
        let mut t = 0.0;
        for k in (1..=depth).rev() {
            let kf = k as f64;
            t = kf / (kf / (z + t) + 1.0);
        }
        (-z).exp() / (z + t)
    }
}

fn check_exponential_integral() -> Result<String, String> {
    let mut worst = 0.0f64;
    let mut z = 1e-6;
    while z <= 50.0 {
        let got = exp_integral_e1(z).map_err(|e| e.to_string())?;
        let want = oracle_e1(z);
        let rel = (got - want).abs() / want.abs();
        if rel > 1e-10 {
            return Err(format!("E1({z}) = {got}, oracle {want}, rel {rel:.2e}"));
        }
        worst = worst.max(rel);
        z *= 1.5;
    }
    Ok(format!("worst relative deviation {worst:.2e}"))
}

fn check_quadrature() -> Result<String, String> {
    let pi = quad_finite(|x| 4.0 / (1.0 + x * x), 0.0, 1.0, 1e-10).map_err(|e| e.to_string())?;
    if (pi - std::f64::consts::PI).abs() > 1e-9 {
        return Err(format!("pi quadrature off: {pi}"));
    }
    let one = quad_semi_infinite(|x| (-x).exp(), 1e-10).map_err(|e| e.to_string())?;
    if (one - 1.0).abs() > 1e-9 {
        return Err(format!("exponential mass off: {one}"));
    }
    let cross = quad_semi_infinite(|x| (-x).exp() / (1.0 + x), 1e-10).map_err(|e| e.to_string())?;
    let want = std::f64::consts::E * exp_integral_e1(1.0).unwrap();
    if (cross - want).abs() > 1e-8 {
        return Err(format!("E1 cross-check off: {cross} vs {want}"));
    }
    Ok("pi, exponential mass and E1 cross-check within 1e-8".into())
}

fn check_sampler_moments() -> Result<String, String> {
    let params = Scenario::default().system_params().unwrap();
    let n = 200_000u64;
    let mut sum = 0.0;
    for i in 0..n {
        sum += sample_realization(&params.profile, 77, i).g_sr;
    }
    let mean = sum / n as f64;
    let want = params.profile.var_sr;
    // Exponential: sd = mean, so the standard error is want / sqrt(n).
    let se = want / (n as f64).sqrt();
    if (mean - want).abs() > 5.0 * se {
        return Err(format!("sample mean {mean} vs variance {want}"));
    }
    let a = sample_realization(&params.profile, 77, 12345);
    let b = sample_realization(&params.profile, 77, 12345);
    if a != b {
        return Err("sampler not deterministic".into());
    }
    Ok(format!(
        "mean within {:.2} SE, draws bit-stable",
        (mean - want).abs() / se
    ))
}

fn check_analysis_against_simulation() -> Result<String, String> {
    let scn = Scenario {
        a_s: 0.25,
        a_r: 0.14,
        ..Scenario::default()
    };
    let params = scn.system_params().unwrap();
    let report = analytical_report(&params).map_err(|e| e.to_string())?;
    let terms = estimate_ergodic_terms(&params, 200_000, 5);
    for (name, analytic, mc) in [
        ("c_d1", report.c_d1, terms.c_d1),
        ("c_d2", report.c_d2, terms.c_d2),
        ("ce_d1", report.ce_d1, terms.ce_d1),
    ] {
        let tol = (0.02 * analytic).max(6.0 * mc.std_err);
        if (analytic - mc.mean).abs() > tol {
            return Err(format!("{name}: analytic {analytic} vs MC {}", mc.mean));
        }
    }
    if report.ce_d2_ub < terms.ce_d2.mean - 2.0 * terms.ce_d2.std_err {
        return Err(format!(
            "ce_d2_ub {} below MC {}",
            report.ce_d2_ub, terms.ce_d2.mean
        ));
    }
    Ok("three closed forms within 2% of 2e5-draw MC, bound direction holds".into())
}

fn check_rate_identity() -> Result<String, String> {
    let params = Scenario::default().system_params().unwrap();
    for i in 0..200u64 {
        let ch = sample_realization(&params.profile, 3, i);
        let a_s = 0.5 * aux_uniform(4, 0, 2 * i);
        let a_r = 0.5 * aux_uniform(4, 0, 2 * i + 1);
        let coeffs = DcCoefficients::from_params(&params, &ch);
        let direct = instantaneous_secrecy(&params.with_allocation(a_s, a_r), &ch).secrecy_sum;
        if (coeffs.true_ssr(a_s, a_r) - direct).abs() > 1e-12 {
            return Err(format!("identity violated on realization {i}"));
        }
    }
    Ok("coefficient form equals the SINR pipeline on 200 random pairs".into())
}

fn check_surrogate_gradients() -> Result<String, String> {
    let params = Scenario::default().system_params().unwrap();
    let h = 1e-6;
    for i in 0..10u64 {
        let ch = sample_realization(&params.profile, 9, i);
        let co = DcCoefficients::from_params(&params, &ch);
        let anchor = (
            0.1 + 0.3 * aux_uniform(10, 0, i),
            0.1 + 0.3 * aux_uniform(10, 1, i),
        );
        let model = build_surrogate(&co, anchor);
        let g_eve = |s: f64, r: f64| (1.0 + s * co.c + r * co.d).log2();
        let fd = (g_eve(anchor.0 + h, anchor.1) - g_eve(anchor.0 - h, anchor.1)) / (2.0 * h);
        if (model.t_eve.grad_a_s - fd).abs() > 1e-6 * model.t_eve.grad_a_s.abs().max(1.0) {
            return Err(format!("gradient {} vs fd {fd}", model.t_eve.grad_a_s));
        }
    }
    Ok("tangent gradients match central differences on 10 models".into())
}

fn check_optimizer_ascent() -> Result<String, String> {
    let params = Scenario::default().system_params().unwrap();
    for i in 0..10u64 {
        let ch = sample_realization(&params.profile, 13, i);
        let coeffs = DcCoefficients::from_params(&params, &ch);
        let trace = sca_run(&coeffs, FPAPT_ALLOCATION, DEFAULT_EPS, DEFAULT_MAX_ITER);
        for w in trace.iterates.windows(2) {
            if w[1].true_ssr < w[0].true_ssr - 1e-9 {
                return Err(format!("descent on realization {i}"));
            }
        }
        if trace.best_ssr < fpapt_baseline(&coeffs) {
            return Err(format!("optimizer below baseline on realization {i}"));
        }
    }
    Ok("monotone ascent and baseline dominance on 10 realizations".into())
}

fn check_deterministic_output() -> Result<String, String> {
    let overrides = Overrides {
        n: Some(500),
        seed: Some(2),
    };
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?
        .install(|| run_figure(6, &overrides).map(|t| t.to_csv_bytes()))
        .map_err(|e| e.to_string())?;
    let dual = rayon::ThreadPoolBuilder::new()
        .num_threads(2)
        .build()
        .map_err(|e| e.to_string())?
        .install(|| run_figure(6, &overrides).map(|t| t.to_csv_bytes()))
        .map_err(|e| e.to_string())?;
    if single != dual {
        return Err("CSV bytes differ across worker counts".into());
    }
    Ok(format!(
        "{} CSV bytes identical across worker counts",
        single.len()
    ))
}

fn check_rate_params_consistency() -> Result<String, String> {
    let params = Scenario::default().system_params().unwrap();
    let rp = RateParams::new(&params);
    if (rp.s - (rp.pi_sr + rp.pi_rd1)).abs() > 1e-12 {
        return Err("s != pi_sr + pi_rd1".into());
    }
    if (rp.c1 - 1.0 / rp.s).abs() > 1e-15 || (rp.c2 - rp.beta / (rp.lambda_rr * rp.s)).abs() > 1e-15
    {
        return Err("closed-form constants inconsistent".into());
    }
    Ok("derived constants self-consistent".into())
}

/// Run every check, printing one line each; returns overall success.
pub fn run_all() -> bool {
    let checks: &[Check] = &[
        ("exponential-integral", check_exponential_integral),
        ("quadrature", check_quadrature),
        ("channel-sampler", check_sampler_moments),
        ("rate-params", check_rate_params_consistency),
        ("analysis-vs-simulation", check_analysis_against_simulation),
        ("rate-identity", check_rate_identity),
        ("surrogate-gradients", check_surrogate_gradients),
        ("optimizer-ascent", check_optimizer_ascent),
        ("deterministic-output", check_deterministic_output),
    ];
    let mut ok = true;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("selftest {name}: ok ({detail})"),
            Err(detail) => {
                ok = false;
                println!("selftest {name}: FAILED ({detail})");
            }
        }
    }
    if ok {
        println!("selftest: all {} checks passed", checks.len());
    }
    ok
}
