//! Property tests for the spec-level invariants: SINR monotonicity and
//! bounds, sampler determinism, quadrature identities, surrogate
//! conservativeness and CSV stability.

use proptest::prelude::*;

use fdnoma::channel::{sample_batch, sample_realization, ChannelRealization};
use fdnoma::figures::ResultTable;
use fdnoma::numerics::{quad_finite, quad_semi_infinite};
use fdnoma::optimizer::{build_surrogate, DcCoefficients};
use fdnoma::params::FadingProfile;
use fdnoma::sinr::{compute_sinrs, instantaneous_secrecy};
use fdnoma::{analysis, SystemParams};

fn unit_profile() -> FadingProfile {
    FadingProfile {
        var_sr: 1.0,
        var_rd1: 1.0,
        var_rd2: 1.0,
        var_se: 1.0,
        var_re: 1.0,
        var_si: 1.0,
    }
}

fn params(a_s: f64, a_r: f64, rho: f64, rho_si: f64) -> SystemParams {
    SystemParams {
        rho,
        rho_si,
        nu: 3.0,
        a_s,
        a_r,
        profile: unit_profile(),
    }
}

fn gain() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), 1e-6..10.0f64]
}

fn channel() -> impl Strategy<Value = ChannelRealization> {
    (gain(), gain(), gain(), gain(), gain(), gain()).prop_map(
        |(g_sr, g_rd1, g_rd2, g_se, g_re, g_si)| ChannelRealization {
            g_sr,
            g_rd1,
            g_rd2,
            g_se,
            g_re,
            g_si,
        },
    )
}

proptest! {
    #[test]
    fn sinr_monotone_in_allocations(
        ch in channel(),
        a in 0.01..0.49f64,
        delta in 1e-4..0.01f64,
        rho in 0.1..2000.0f64,
        rho_si in 0.0..2.0f64,
    ) {
        let lo = compute_sinrs(&params(a, a, rho, rho_si), &ch);
        let hi_s = compute_sinrs(&params(a + delta, a, rho, rho_si), &ch);
        let hi_r = compute_sinrs(&params(a, a + delta, rho, rho_si), &ch);
        if ch.g_sr > 0.0 {
            prop_assert!(hi_s.relay_d1 > lo.relay_d1);
            prop_assert!(hi_s.relay_d2 < lo.relay_d2);
        }
        if ch.g_rd1 > 0.0 {
            prop_assert!(hi_r.d1_own > lo.d1_own);
            prop_assert!(hi_r.d1_sic < lo.d1_sic);
        }
        if ch.g_rd2 > 0.0 {
            prop_assert!(hi_r.d2_own < lo.d2_own);
        }
    }

    #[test]
    fn sinr_bounds_and_effective_minimum(
        ch in channel(),
        a_s in 0.01..0.5f64,
        a_r in 0.01..0.5f64,
        rho in 0.1..2000.0f64,
        rho_si in 0.0..2.0f64,
    ) {
        let s = compute_sinrs(&params(a_s, a_r, rho, rho_si), &ch);
        prop_assert!(s.relay_d2 < (1.0 - a_s) / a_s);
        prop_assert!(s.d2_own < (1.0 - a_r) / a_r);
        prop_assert!(s.eff_d1 <= s.relay_d1 && s.eff_d1 <= s.d1_own);
        prop_assert!(s.eff_d2 <= s.relay_d2 && s.eff_d2 <= s.d2_own && s.eff_d2 <= s.d1_sic);
        for v in [s.relay_d1, s.relay_d2, s.d1_own, s.d1_sic, s.d2_own, s.eve_d1, s.eve_d2] {
            prop_assert!(v >= 0.0 && v.is_finite());
        }
    }

    #[test]
    fn sinr_scale_invariance_without_si(
        ch in channel(),
        a_s in 0.01..0.5f64,
        a_r in 0.01..0.5f64,
        factor in 1.0..1000.0f64,
    ) {
        let base = params(a_s, a_r, 10.0, 0.0);
        let scaled_params = params(a_s, a_r, 10.0 * factor, 0.0);
        let scaled_ch = ChannelRealization {
            g_sr: ch.g_sr / factor,
            g_rd1: ch.g_rd1 / factor,
            g_rd2: ch.g_rd2 / factor,
            g_se: ch.g_se / factor,
            g_re: ch.g_re / factor,
            g_si: ch.g_si / factor,
        };
        let a = compute_sinrs(&base, &ch);
        let b = compute_sinrs(&scaled_params, &scaled_ch);
        for (x, y) in [
            (a.relay_d1, b.relay_d1),
            (a.relay_d2, b.relay_d2),
            (a.d1_own, b.d1_own),
            (a.d2_own, b.d2_own),
            (a.eve_d1, b.eve_d1),
            (a.eve_d2, b.eve_d2),
        ] {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn sampler_is_deterministic_and_nonnegative(seed in any::<u64>(), index in 0..1_000_000u64) {
        let profile = unit_profile();
        let a = sample_realization(&profile, seed, index);
        let b = sample_realization(&profile, seed, index);
        prop_assert_eq!(a, b);
        for g in [a.g_sr, a.g_rd1, a.g_rd2, a.g_se, a.g_re, a.g_si] {
            prop_assert!(g >= 0.0 && g.is_finite());
        }
    }

    #[test]
    fn batches_agree_with_pointwise_sampling(seed in any::<u64>(), count in 1..200u64) {
        let profile = unit_profile();
        let batch = sample_batch(&profile, seed, count);
        prop_assert_eq!(batch.len() as u64, count);
        for (i, ch) in batch.iter().enumerate() {
            prop_assert_eq!(*ch, sample_realization(&profile, seed, i as u64));
        }
    }

    #[test]
    fn quadrature_integrates_low_degree_polynomials(
        c0 in -5.0..5.0f64,
        c1 in -5.0..5.0f64,
        c2 in -5.0..5.0f64,
        hi in 0.1..4.0f64,
    ) {
        let got = quad_finite(|x| c0 + c1 * x + c2 * x * x, 0.0, hi, 1e-12).unwrap();
        let want = c0 * hi + c1 * hi * hi / 2.0 + c2 * hi * hi * hi / 3.0;
        prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
    }

    #[test]
    fn semi_infinite_exponential_moments(rate in 0.2..20.0f64) {
        let total = quad_semi_infinite(|x| rate * (-rate * x).exp(), 1e-10).unwrap();
        prop_assert!((total - 1.0).abs() < 1e-8);
        let mean = quad_semi_infinite(|x| x * rate * (-rate * x).exp(), 1e-10).unwrap();
        prop_assert!((mean - 1.0 / rate).abs() < 1e-8 / rate.min(1.0));
    }

    #[test]
    fn strong_user_cdf_is_a_distribution(
        a_s in 0.01..0.5f64,
        a_r in 0.01..0.5f64,
        rho in 1.0..2000.0f64,
        rho_si in 0.0..2.0f64,
    ) {
        let p = params(a_s, a_r, rho, rho_si);
        let rp = analysis::RateParams::new(&p);
        let mut last = 0.0;
        for i in 0..100 {
            let x = i as f64 * 0.2;
            let f = analysis::cdf_eff_d1(x, &rp, rho_si);
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(f >= last - 1e-12);
            last = f;
        }
    }

    #[test]
    fn coefficient_identity_random(
        ch in channel(),
        a_s in 0.0..0.5f64,
        a_r in 0.0..0.5f64,
        rho in 0.1..2000.0f64,
        rho_si in 0.0..2.0f64,
    ) {
        let p = params(a_s, a_r, rho, rho_si);
        let coeffs = DcCoefficients::from_params(&p, &ch);
        let direct = instantaneous_secrecy(&p, &ch).secrecy_sum;
        prop_assert!((coeffs.true_ssr(a_s, a_r) - direct).abs() <= 1e-12);
    }

    #[test]
    fn surrogate_conservative_at_random_points(
        ch in channel(),
        rho in 0.1..2000.0f64,
        rho_si in 0.0..2.0f64,
        anchor_s in 0.0..0.5f64,
        anchor_r in 0.0..0.5f64,
        probe_s in 0.0..0.5f64,
        probe_r in 0.0..0.5f64,
    ) {
        let coeffs = DcCoefficients::from_realization(rho, rho_si, &ch);
        let model = build_surrogate(&coeffs, (anchor_s, anchor_r));
        let surrogate = model.objective(probe_s, probe_r);
        let truth = coeffs.true_ssr(probe_s, probe_r);
        prop_assert!(
            surrogate <= truth + 1e-9,
            "surrogate {} exceeds true SSR {}", surrogate, truth
        );
        // Tangency at the anchor itself.
        let at_anchor = model.objective(anchor_s, anchor_r);
        prop_assert!((at_anchor - coeffs.true_ssr(anchor_s, anchor_r)).abs() < 1e-12);
    }

    #[test]
    fn csv_serialization_is_pure(values in prop::collection::vec(-1e6..1e6f64, 1..20)) {
        let mut table = ResultTable::new(vec!["v".to_string()]);
        for v in &values {
            table.push_row(vec![*v]);
        }
        prop_assert_eq!(table.to_csv_bytes(), table.to_csv_bytes());
    }
}
