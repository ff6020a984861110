//! Instantaneous SINRs and rates for one channel realization.
//!
//! Decoding order: the relay decodes the weak user's symbol first (treating
//! the strong user's as interference), then the strong user's with the weak
//! one removed. At the destinations the strong user D1 first decodes D2's
//! symbol and cancels it before decoding its own; the weak user D2 decodes
//! directly. The eavesdropper combines the source-path and relay-path copies
//! (MRC) and runs the same NOMA order. A user's effective SINR is the
//! minimum over every stage its message must survive.
//!
//! The eavesdropper's SINR for the strong user carries no additive noise
//! floor term: after MRC and removal of the weak user's symbol it is the
//! plain weighted sum of the two tap powers, which keeps its distribution
//! exactly hypoexponential (the form the analytical eavesdropping capacity
//! is built on).

use crate::channel::ChannelRealization;
use crate::params::SystemParams;

/// Every decoding-stage SINR for one realization, plus the per-user
/// effective SINRs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrSet {
    /// Relay decoding D1's symbol.
    pub relay_d1: f64,
    /// Relay decoding D2's symbol (D1's symbol still superposed).
    pub relay_d2: f64,
    /// D1 decoding its own symbol after cancelling D2's.
    pub d1_own: f64,
    /// D1 decoding D2's symbol (the cancellation stage).
    pub d1_sic: f64,
    /// D2 decoding its own symbol directly.
    pub d2_own: f64,
    /// Eavesdropper on D1's symbol after MRC.
    pub eve_d1: f64,
    /// Eavesdropper on D2's symbol after MRC.
    pub eve_d2: f64,
    /// min(relay_d1, d1_own)
    pub eff_d1: f64,
    /// min(relay_d2, d2_own, d1_sic)
    pub eff_d2: f64,
}

/// Achievable, eavesdropping and secrecy rates (bits/s/Hz) for one
/// realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    pub rate_d1: f64,
    pub rate_d2: f64,
    pub eve_rate_d1: f64,
    pub eve_rate_d2: f64,
    /// max(0, rate_d1 - eve_rate_d1)
    pub secrecy_d1: f64,
    pub secrecy_d2: f64,
    pub secrecy_sum: f64,
}

/// log2(1 + x), accurate near zero.
#[inline]
pub fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

/// All decoding-stage SINRs for one realization. Every denominator is at
/// least one, so the outputs are finite and nonnegative for any valid input.
pub fn compute_sinrs(params: &SystemParams, ch: &ChannelRealization) -> SinrSet {
    let rho = params.rho;
    let a_s = params.a_s;
    let a_r = params.a_r;
    let si = params.rho_si * ch.g_si;

    let relay_d2 = (1.0 - a_s) * rho * ch.g_sr / (a_s * rho * ch.g_sr + si + 1.0);
    let relay_d1 = a_s * rho * ch.g_sr / (si + 1.0);

    let d1_sic = (1.0 - a_r) * rho * ch.g_rd1 / (a_r * rho * ch.g_rd1 + 1.0);
    let d1_own = a_r * rho * ch.g_rd1;
    let d2_own = (1.0 - a_r) * rho * ch.g_rd2 / (a_r * rho * ch.g_rd2 + 1.0);

    let eve_d2 = ((1.0 - a_s) * rho * ch.g_se + (1.0 - a_r) * rho * ch.g_re)
        / (a_s * rho * ch.g_se + a_r * rho * ch.g_re + 1.0);
    let eve_d1 = a_s * rho * ch.g_se + a_r * rho * ch.g_re;

    SinrSet {
        relay_d1,
        relay_d2,
        d1_own,
        d1_sic,
        d2_own,
        eve_d1,
        eve_d2,
        eff_d1: relay_d1.min(d1_own),
        eff_d2: relay_d2.min(d2_own).min(d1_sic),
    }
}

/// Rates and clipped secrecy rates from a SINR set.
pub fn instantaneous_rates(sinrs: &SinrSet) -> RateSet {
    let rate_d1 = log2_1p(sinrs.eff_d1);
    let rate_d2 = log2_1p(sinrs.eff_d2);
    let eve_rate_d1 = log2_1p(sinrs.eve_d1);
    let eve_rate_d2 = log2_1p(sinrs.eve_d2);
    let secrecy_d1 = (rate_d1 - eve_rate_d1).max(0.0);
    let secrecy_d2 = (rate_d2 - eve_rate_d2).max(0.0);
    RateSet {
        rate_d1,
        rate_d2,
        eve_rate_d1,
        eve_rate_d2,
        secrecy_d1,
        secrecy_d2,
        secrecy_sum: secrecy_d1 + secrecy_d2,
    }
}

/// Per-realization secrecy rates straight from a channel realization.
pub fn instantaneous_secrecy(params: &SystemParams, ch: &ChannelRealization) -> RateSet {
    instantaneous_rates(&compute_sinrs(params, ch))
}
