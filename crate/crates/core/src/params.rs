//! System configuration: link geometry, fading statistics and transmit-side
//! parameters shared by every other module.
//!
//! All internal math works in linear units; decibel values appear only at
//! the configuration boundary (see [`db_to_linear`] / [`linear_to_db`]).
//! Noise power is normalized to one, so the transmit side is fully described
//! by the transmit SNR `rho` and the residual self-interference SNR
//! `rho_si`.

use crate::error::Error;
use crate::Result;

/// Pairwise distances (meters) between the five vehicles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Topology {
    /// Source to relay.
    pub d_sr: f64,
    /// Relay to the strong user.
    pub d_rd1: f64,
    /// Relay to the weak user.
    pub d_rd2: f64,
    /// Source to eavesdropper.
    pub d_se: f64,
    /// Relay to eavesdropper.
    pub d_re: f64,
}

/// Per-link channel variances. Each link variance is the corresponding
/// distance raised to the negative pathloss exponent; the self-interference
/// variance is a free parameter (its strength is normally folded into
/// `rho_si`, so it defaults to one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingProfile {
    pub var_sr: f64,
    pub var_rd1: f64,
    pub var_rd2: f64,
    pub var_se: f64,
    pub var_re: f64,
    pub var_si: f64,
}

/// Complete system configuration for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Linear transmit SNR (transmit power over noise power), > 0.
    pub rho: f64,
    /// Linear residual self-interference SNR, >= 0.
    pub rho_si: f64,
    /// Pathloss exponent (kept for provenance; already folded into the
    /// profile variances).
    pub nu: f64,
    /// Source power allocation parameter, in [0, 1/2].
    pub a_s: f64,
    /// Relay power allocation parameter, in [0, 1/2].
    pub a_r: f64,
    pub profile: FadingProfile,
}

/// Convert a dB quantity to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear quantity to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Derive the per-link variances `d^-nu` from the geometry.
///
/// `var_si` is passed through unchanged: the self-interference channel has
/// no distance attached to it.
pub fn variances_from_topology(topology: &Topology, nu: f64, var_si: f64) -> Result<FadingProfile> {
    let mut bad = Vec::new();
    for (field, d) in [
        ("d_sr", topology.d_sr),
        ("d_rd1", topology.d_rd1),
        ("d_rd2", topology.d_rd2),
        ("d_se", topology.d_se),
        ("d_re", topology.d_re),
    ] {
        if d.is_nan() || d <= 0.0 {
            bad.push(format!("{field} must be positive (got {d})"));
        }
    }
    if nu.is_nan() || nu <= 0.0 {
        bad.push(format!("nu must be positive (got {nu})"));
    }
    if var_si.is_nan() || var_si <= 0.0 {
        bad.push(format!("var_si must be positive (got {var_si})"));
    }
    if !bad.is_empty() {
        return Err(Error::invalid(bad.join("; ")));
    }
    Ok(FadingProfile {
        var_sr: topology.d_sr.powf(-nu),
        var_rd1: topology.d_rd1.powf(-nu),
        var_rd2: topology.d_rd2.powf(-nu),
        var_se: topology.d_se.powf(-nu),
        var_re: topology.d_re.powf(-nu),
        var_si,
    })
}

impl FadingProfile {
    fn check(&self, bad: &mut Vec<String>) {
        for (field, v) in [
            ("var_sr", self.var_sr),
            ("var_rd1", self.var_rd1),
            ("var_rd2", self.var_rd2),
            ("var_se", self.var_se),
            ("var_re", self.var_re),
            ("var_si", self.var_si),
        ] {
            if !v.is_finite() || v <= 0.0 {
                bad.push(format!("{field} must be positive and finite (got {v})"));
            }
        }
    }
}

impl SystemParams {
    /// Validate every invariant, naming each offending field on failure.
    ///
    /// The power allocation parameters are admitted on the closed interval
    /// [0, 1/2] so that the optimizer's feasible box is representable.
    pub fn validate(self) -> Result<Self> {
        let mut bad = Vec::new();
        if !self.rho.is_finite() || self.rho <= 0.0 {
            bad.push(format!(
                "rho must be positive and finite (got {})",
                self.rho
            ));
        }
        if !self.rho_si.is_finite() || self.rho_si < 0.0 {
            bad.push(format!(
                "rho_si must be nonnegative and finite (got {})",
                self.rho_si
            ));
        }
        for (field, a) in [("a_s", self.a_s), ("a_r", self.a_r)] {
            if !(0.0..=0.5).contains(&a) {
                bad.push(format!("{field} must lie in [0, 1/2] (got {a})"));
            }
        }
        self.profile.check(&mut bad);
        if bad.is_empty() {
            Ok(self)
        } else {
            Err(Error::invalid(bad.join("; ")))
        }
    }

    /// Copy of `self` with a different power allocation pair.
    pub fn with_allocation(mut self, a_s: f64, a_r: f64) -> Self {
        self.a_s = a_s;
        self.a_r = a_r;
        self
    }
}
