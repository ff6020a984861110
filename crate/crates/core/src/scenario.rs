//! Line-oriented `key = value` scenario files.
//!
//! An empty file is the baseline configuration: 10 m source-relay hop,
//! 10 m / 15 m relay-user hops, pathloss exponent 3, 30 dB transmit SNR,
//! -10 dB residual self-interference, far eavesdropper at 40 m / 30 m and
//! the fixed (0.2, 0.2) power split. `#` starts a comment.

use crate::error::Error;
use crate::params::{db_to_linear, variances_from_topology, SystemParams, Topology};
use crate::Result;

/// Which secrecy estimator a simulation reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McMode {
    /// Clip the difference of the mean rates per user.
    A,
    /// Average the per-realization clipped secrecy sum.
    B,
}

/// A sweepable scenario field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepField {
    AS,
    AR,
    RhoDb,
    RhoSiDb,
    DSe,
    DRe,
}

impl SweepField {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "a_s" => SweepField::AS,
            "a_r" => SweepField::AR,
            "rho_db" => SweepField::RhoDb,
            "rho_si_db" => SweepField::RhoSiDb,
            "d_se" => SweepField::DSe,
            "d_re" => SweepField::DRe,
            _ => return None,
        })
    }
}

/// Sweep one field over an inclusive range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub field: SweepField,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    /// The sweep grid, inclusive of `stop` up to rounding slack.
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut i = 0u64;
        loop {
            let v = self.start + i as f64 * self.step;
            if v > self.stop + 1e-9 * self.step.abs() {
                break;
            }
            out.push(v);
            i += 1;
        }
        out
    }
}

/// One experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub rho_db: f64,
    pub rho_si_db: f64,
    pub nu: f64,
    pub d_sr: f64,
    pub d_rd1: f64,
    pub d_rd2: f64,
    pub d_se: f64,
    pub d_re: f64,
    pub a_s: f64,
    pub a_r: f64,
    pub sigma_si_sq: f64,
    /// Realization count; `None` means the per-command default
    /// (1e6 for simulation sweeps, 1e4 for optimizer runs).
    pub n_realizations: Option<u64>,
    pub seed: u64,
    pub mc_mode: McMode,
    pub sweep: Option<Sweep>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            rho_db: 30.0,
            rho_si_db: -10.0,
            nu: 3.0,
            d_sr: 10.0,
            d_rd1: 10.0,
            d_rd2: 15.0,
            d_se: 40.0,
            d_re: 30.0,
            a_s: 0.2,
            a_r: 0.2,
            sigma_si_sq: 1.0,
            n_realizations: None,
            seed: 1,
            mc_mode: McMode::A,
            sweep: None,
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::ScenarioParse {
        line,
        message: message.into(),
    }
}

/// Parse a scenario file; defaults apply to every unset key.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut scn = Scenario::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        let number = |what: &str| -> Result<f64> {
            match what.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(parse_err(
                    line_no,
                    format!("`{key}`: cannot parse `{what}` as a finite number"),
                )),
            }
        };
        let positive = |what: &str| -> Result<f64> {
            let v = number(what)?;
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(parse_err(
                    line_no,
                    format!("`{key}` must be positive (got {what})"),
                ))
            }
        };
        let allocation = |what: &str| -> Result<f64> {
            let v = number(what)?;
            if (0.0..=0.5).contains(&v) {
                Ok(v)
            } else {
                Err(parse_err(
                    line_no,
                    format!("`{key}` must lie in [0, 1/2] (got {what})"),
                ))
            }
        };
        match key {
            "rho_db" => scn.rho_db = number(value)?,
            "rho_si_db" => scn.rho_si_db = number(value)?,
            "nu" => scn.nu = positive(value)?,
            "d_sr" => scn.d_sr = positive(value)?,
            "d_rd1" => scn.d_rd1 = positive(value)?,
            "d_rd2" => scn.d_rd2 = positive(value)?,
            "d_se" => scn.d_se = positive(value)?,
            "d_re" => scn.d_re = positive(value)?,
            "a_s" => scn.a_s = allocation(value)?,
            "a_r" => scn.a_r = allocation(value)?,
            "sigma_si_sq" => scn.sigma_si_sq = positive(value)?,
            "n_realizations" | "n" => {
                let n = value
                    .parse::<u64>()
                    .map_err(|_| parse_err(line_no, format!("`{key}`: bad count `{value}`")))?;
                if n < 2 {
                    return Err(parse_err(line_no, "n_realizations must be at least 2"));
                }
                scn.n_realizations = Some(n);
            }
            "seed" => {
                scn.seed = value
                    .parse::<u64>()
                    .map_err(|_| parse_err(line_no, format!("`seed`: bad integer `{value}`")))?;
            }
            "mc_mode" => {
                scn.mc_mode = match value {
                    "a" | "A" => McMode::A,
                    "b" | "B" => McMode::B,
                    other => {
                        return Err(parse_err(
                            line_no,
                            format!("`mc_mode` must be a or b, got `{other}`"),
                        ))
                    }
                };
            }
            "sweep" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 4 {
                    return Err(parse_err(
                        line_no,
                        "`sweep` takes `field, start, stop, step`",
                    ));
                }
                let field = SweepField::parse(parts[0]).ok_or_else(|| {
                    parse_err(line_no, format!("unknown sweep field `{}`", parts[0]))
                })?;
                let start = number(parts[1])?;
                let stop = number(parts[2])?;
                let step = number(parts[3])?;
                if step <= 0.0 || stop < start {
                    return Err(parse_err(
                        line_no,
                        "`sweep` needs step > 0 and stop >= start",
                    ));
                }
                if matches!(field, SweepField::AS | SweepField::AR)
                    && !(0.0 <= start && stop <= 0.5)
                {
                    return Err(parse_err(line_no, "allocation sweep must stay in [0, 1/2]"));
                }
                scn.sweep = Some(Sweep {
                    field,
                    start,
                    stop,
                    step,
                });
            }
            other => return Err(parse_err(line_no, format!("unknown key `{other}`"))),
        }
    }
    Ok(scn)
}

impl Scenario {
    /// Realization count with the given per-command default.
    pub fn n_or(&self, default: u64) -> u64 {
        self.n_realizations.unwrap_or(default)
    }

    /// Copy with one sweepable field replaced.
    pub fn with_field(&self, field: SweepField, value: f64) -> Scenario {
        let mut scn = self.clone();
        match field {
            SweepField::AS => scn.a_s = value,
            SweepField::AR => scn.a_r = value,
            SweepField::RhoDb => scn.rho_db = value,
            SweepField::RhoSiDb => scn.rho_si_db = value,
            SweepField::DSe => scn.d_se = value,
            SweepField::DRe => scn.d_re = value,
        }
        scn
    }

    /// Convert to validated linear-scale system parameters.
    pub fn system_params(&self) -> Result<SystemParams> {
        let topology = Topology {
            d_sr: self.d_sr,
            d_rd1: self.d_rd1,
            d_rd2: self.d_rd2,
            d_se: self.d_se,
            d_re: self.d_re,
        };
        SystemParams {
            rho: db_to_linear(self.rho_db),
            rho_si: db_to_linear(self.rho_si_db),
            nu: self.nu,
            a_s: self.a_s,
            a_r: self.a_r,
            profile: variances_from_topology(&topology, self.nu, self.sigma_si_sq)?,
        }
        .validate()
    }
}
