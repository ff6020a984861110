//! Seeded Monte Carlo estimation of the ergodic rate quantities.
//!
//! Two secrecy conventions are exposed, because ergodic secrecy can be read
//! either way from the definitions:
//!
//! - mode A clips the *difference of expectations* per user
//!   (`[E r - E re]^+`, the ergodic secrecy capacity definition);
//! - mode B clips *per realization* and averages (`E [r - re]^+`, the
//!   convention of the per-transmission optimizer experiments).
//!
//! The realization index space is split into fixed-size chunks; one Welford
//! accumulator runs per chunk and the chunk results merge left-to-right.
//! Chunk boundaries depend only on `n`, so estimates are bit-identical for
//! a given `(params, n, seed)` no matter how many workers rayon uses.

use rayon::prelude::*;

use crate::channel::sample_realization;
use crate::params::SystemParams;
use crate::sinr::{compute_sinrs, instantaneous_rates, log2_1p};

/// A sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over sqrt(n).
    pub std_err: f64,
    pub n: u64,
}

/// Monte Carlo means of the four ergodic rate terms.
#[derive(Debug, Clone, Copy)]
pub struct ErgodicTerms {
    /// E[log2(1 + effective SINR of D1)]
    pub c_d1: McEstimate,
    /// E[log2(1 + effective SINR of D2)]
    pub c_d2: McEstimate,
    /// E[log2(1 + eavesdropper SINR on D1's message)]
    pub ce_d1: McEstimate,
    /// E[log2(1 + eavesdropper SINR on D2's message)]
    pub ce_d2: McEstimate,
}

/// Streaming mean/variance accumulator over K parallel statistics
/// (Welford update, Chan merge).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Welford<const K: usize> {
    pub count: u64,
    pub mean: [f64; K],
    m2: [f64; K],
}

impl<const K: usize> Welford<K> {
    pub fn new() -> Self {
        Welford {
            count: 0,
            mean: [0.0; K],
            m2: [0.0; K],
        }
    }

    pub fn push(&mut self, values: [f64; K]) {
        self.count += 1;
        let n = self.count as f64;
        for ((mean, m2), value) in self.mean.iter_mut().zip(&mut self.m2).zip(values) {
            let delta = value - *mean;
            *mean += delta / n;
            *m2 += delta * (value - *mean);
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let n1 = self.count as f64;
        let n2 = other.count as f64;
        let n = n1 + n2;
        for k in 0..K {
            let delta = other.mean[k] - self.mean[k];
            self.mean[k] += delta * n2 / n;
            self.m2[k] += other.m2[k] + delta * delta * n1 * n2 / n;
        }
        self.count += other.count;
        self
    }

    pub fn estimate(&self, k: usize) -> McEstimate {
        let n = self.count;
        let std_err = if n >= 2 {
            (self.m2[k] / (n as f64 - 1.0)).sqrt() / (n as f64).sqrt()
        } else {
            f64::INFINITY
        };
        McEstimate {
            mean: self.mean[k],
            std_err,
            n,
        }
    }
}

/// Fixed chunk width of the deterministic parallel reduction.
const CHUNK: u64 = 16_384;

/// Run `K` per-realization statistics over indices `0..n` in parallel and
/// merge the per-chunk accumulators in index order.
pub(crate) fn accumulate<const K: usize, F>(n: u64, per_realization: F) -> Welford<K>
where
    F: Fn(u64) -> [f64; K] + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(n);
            let mut acc = Welford::<K>::new();
            for i in lo..hi {
                acc.push(per_realization(i));
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Welford::new(), Welford::merge)
}

/// Sample means of the four ergodic rate terms over `n` realizations.
pub fn estimate_ergodic_terms(params: &SystemParams, n: u64, seed: u64) -> ErgodicTerms {
    assert!(n >= 2, "at least two realizations required");
    let acc = accumulate::<4, _>(n, |i| {
        let ch = sample_realization(&params.profile, seed, i);
        let s = compute_sinrs(params, &ch);
        [
            log2_1p(s.eff_d1),
            log2_1p(s.eff_d2),
            log2_1p(s.eve_d1),
            log2_1p(s.eve_d2),
        ]
    });
    ErgodicTerms {
        c_d1: acc.estimate(0),
        c_d2: acc.estimate(1),
        ce_d1: acc.estimate(2),
        ce_d2: acc.estimate(3),
    }
}

/// Mode-A secrecy sum rate: per-user clipped difference of the mean rates.
pub fn secrecy_mode_a(terms: &ErgodicTerms) -> f64 {
    (terms.c_d1.mean - terms.ce_d1.mean).max(0.0) + (terms.c_d2.mean - terms.ce_d2.mean).max(0.0)
}

/// Standard error attached to the mode-A value: the four term estimates
/// combined in quadrature. The legitimate and eavesdropping links are
/// disjoint, so the per-user differences carry no cross-covariance; only
/// the user-to-user coupling through the shared hops is neglected.
pub fn secrecy_mode_a_std_err(terms: &ErgodicTerms) -> f64 {
    (terms.c_d1.std_err.powi(2)
        + terms.c_d2.std_err.powi(2)
        + terms.ce_d1.std_err.powi(2)
        + terms.ce_d2.std_err.powi(2))
    .sqrt()
}

/// Mode-B secrecy sum rate: mean of the per-realization clipped secrecy
/// sum.
pub fn secrecy_mode_b(params: &SystemParams, n: u64, seed: u64) -> McEstimate {
    assert!(n >= 2, "at least two realizations required");
    let acc = accumulate::<1, _>(n, |i| {
        let ch = sample_realization(&params.profile, seed, i);
        [instantaneous_rates(&compute_sinrs(params, &ch)).secrecy_sum]
    });
    acc.estimate(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{variances_from_topology, FadingProfile, Topology};

    fn fig2_params() -> SystemParams {
        let topology = Topology {
            d_sr: 10.0,
            d_rd1: 10.0,
            d_rd2: 15.0,
            d_se: 40.0,
            d_re: 30.0,
        };
        SystemParams {
            rho: 1000.0,
            rho_si: 0.1,
            nu: 3.0,
            a_s: 0.2,
            a_r: 0.14,
            profile: variances_from_topology(&topology, 3.0, 1.0).unwrap(),
        }
    }

    #[test]
    fn dead_channels_give_zero_means() {
        let mut p = fig2_params();
        // Gains forced (effectively) to zero through vanishing variances.
        p.profile = FadingProfile {
            var_sr: 1e-300,
            var_rd1: 1e-300,
            var_rd2: 1e-300,
            var_se: 1e-300,
            var_re: 1e-300,
            var_si: 1e-300,
        };
        let terms = estimate_ergodic_terms(&p, 1000, 3);
        assert!(terms.c_d1.mean < 1e-250);
        assert!(terms.ce_d2.mean < 1e-250);
        assert_eq!(secrecy_mode_a(&terms), 0.0);
    }

    #[test]
    fn estimates_are_deterministic() {
        let p = fig2_params();
        let a = estimate_ergodic_terms(&p, 50_000, 17);
        let b = estimate_ergodic_terms(&p, 50_000, 17);
        assert_eq!(a.c_d1, b.c_d1);
        assert_eq!(a.ce_d2, b.ce_d2);
        let ma = secrecy_mode_b(&p, 50_000, 17);
        let mb = secrecy_mode_b(&p, 50_000, 17);
        assert_eq!(ma, mb);
    }

    #[test]
    fn estimates_independent_of_worker_count() {
        let p = fig2_params();
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = pool1.install(|| estimate_ergodic_terms(&p, 100_000, 7));
        let b = pool4.install(|| estimate_ergodic_terms(&p, 100_000, 7));
        assert_eq!(a.c_d1, b.c_d1);
        assert_eq!(a.c_d2, b.c_d2);
        assert_eq!(a.ce_d1, b.ce_d1);
        assert_eq!(a.ce_d2, b.ce_d2);
    }

    #[test]
    fn welford_merge_matches_single_pass() {
        let values: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.13).collect();
        let mut whole = Welford::<1>::new();
        for &v in &values {
            whole.push([v]);
        }
        let mut left = Welford::<1>::new();
        let mut right = Welford::<1>::new();
        for &v in &values[..400] {
            left.push([v]);
        }
        for &v in &values[400..] {
            right.push([v]);
        }
        let merged = left.merge(right);
        let a = whole.estimate(0);
        let b = merged.estimate(0);
        assert!((a.mean - b.mean).abs() < 1e-12);
        assert!((a.std_err - b.std_err).abs() < 1e-12);
        assert_eq!(a.n, b.n);
    }

    #[test]
    fn doubling_n_shrinks_std_err_like_sqrt2() {
        let p = fig2_params();
        let mut ratios = Vec::new();
        for seed in [1u64, 2, 3] {
            let small = estimate_ergodic_terms(&p, 40_000, seed);
            let large = estimate_ergodic_terms(&p, 80_000, seed);
            for (s, l) in [
                (small.c_d1, large.c_d1),
                (small.c_d2, large.c_d2),
                (small.ce_d1, large.ce_d1),
                (small.ce_d2, large.ce_d2),
            ] {
                ratios.push(l.std_err / s.std_err);
            }
        }
        let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
        assert!(
            (0.6..0.8).contains(&mean_ratio),
            "mean std_err ratio {mean_ratio}"
        );
    }

    #[test]
    fn mode_b_dominates_mode_a() {
        // E[x^+] >= (E[x])^+ : per-realization clipping can only raise the
        // average. Allow 2 SE of estimation noise.
        let p = fig2_params();
        let n = 100_000;
        let terms = estimate_ergodic_terms(&p, n, 5);
        let mode_a = secrecy_mode_a(&terms);
        let mode_b = secrecy_mode_b(&p, n, 5);
        assert!(
            mode_b.mean >= mode_a - 2.0 * (mode_b.std_err + secrecy_mode_a_std_err(&terms)),
            "mode B {} vs mode A {mode_a}",
            mode_b.mean
        );
    }

    #[test]
    fn eve_free_modes_agree() {
        // Without an eavesdropper nothing clips, so both conventions
        // estimate the same expectation from the same realizations.
        let mut p = fig2_params();
        p.profile.var_se = 1e-300;
        p.profile.var_re = 1e-300;
        let n = 50_000;
        let terms = estimate_ergodic_terms(&p, n, 9);
        let mode_a = secrecy_mode_a(&terms);
        let mode_b = secrecy_mode_b(&p, n, 9);
        assert!((mode_a - mode_b.mean).abs() < 1e-9);
    }

    #[test]
    fn clipping_edges() {
        let zero = McEstimate {
            mean: 0.0,
            std_err: 0.0,
            n: 2,
        };
        let one = McEstimate {
            mean: 1.0,
            std_err: 0.0,
            n: 2,
        };
        // Eavesdropper dominates both users.
        let dominated = ErgodicTerms {
            c_d1: zero,
            c_d2: zero,
            ce_d1: one,
            ce_d2: one,
        };
        assert_eq!(secrecy_mode_a(&dominated), 0.0);
        // Eavesdropper absent.
        let free = ErgodicTerms {
            c_d1: one,
            c_d2: one,
            ce_d1: zero,
            ce_d2: zero,
        };
        assert_eq!(secrecy_mode_a(&free), 2.0);
    }
}
