//! Canned experiment recipes and CSV emission.
//!
//! Each recipe produces a [`ResultTable`]: a rectangular, deterministically
//! ordered block of reals. Sweep grids follow the visible axis ranges of
//! the experiment plots: allocation sweeps use step 0.02 on [0.02, 0.48],
//! the transmit-SNR sweep 0..40 dB in 2 dB steps, the residual-SI sweep
//! -30..10 dB in 2 dB steps and the eavesdropper-distance sweep 10..200 m
//! in 10 m steps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::analysis::{analytical_report, AnalyticalReport};
use crate::channel::{aux_uniform, sample_realization};
use crate::error::Error;
use crate::mc::{
    accumulate, estimate_ergodic_terms, secrecy_mode_a, secrecy_mode_a_std_err, secrecy_mode_b,
};
use crate::optimizer::{
    fpapt_baseline, sca_optimize, DcCoefficients, DEFAULT_EPS, DEFAULT_MAX_ITER,
    DEFAULT_RANDOM_STARTS,
};
use crate::scenario::{McMode, Scenario};
use crate::Result;

/// Run metadata carried into the CSV as leading comment lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    pub n: u64,
    pub version: String,
}

impl Provenance {
    fn new(seed: u64, n: u64) -> Self {
        Provenance {
            seed,
            n,
            version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }
}

/// A rectangular table of reals with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub provenance: Option<Provenance>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        ResultTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            provenance: None,
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "ragged result row");
        self.rows.push(row);
    }

    /// Serialize to CSV: optional `#` provenance comments, a header row,
    /// then one line per data row with every real at 12 significant
    /// digits. Identical tables serialize to identical bytes.
    pub fn to_csv_bytes(&self) -> Vec<u8> {
        let mut out = String::new();
        if let Some(p) = &self.provenance {
            out.push_str(&format!(
                "# seed = {}\n# n = {}\n# version = {}\n",
                p.seed, p.n, p.version
            ));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                first = false;
                // Normalize negative zero so equal values serialize equally.
                let v = if *v == 0.0 { 0.0 } else { *v };
                out.push_str(&format!("{v:.11e}"));
            }
            out.push('\n');
        }
        out.into_bytes()
    }
}

/// Write a table to `path` as CSV (LF line endings).
pub fn write_csv(table: &ResultTable, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    w.write_all(&table.to_csv_bytes())?;
    w.flush()?;
    Ok(())
}

/// Optional overrides applied on top of a recipe or scenario.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub n: Option<u64>,
    pub seed: Option<u64>,
}

/// Default realization counts: desk-scale figure sweeps, the desk-scale
/// optimizer recipe, and full per-realization optimizer runs.
pub const DEFAULT_SWEEP_N: u64 = 100_000;
pub const DEFAULT_FIGURE7_N: u64 = 1_000;
pub const DEFAULT_OPTIMIZE_N: u64 = 10_000;

const SWEEP_COLUMNS: [&str; 23] = [
    "rho_db",
    "rho_si_db",
    "d_se",
    "d_re",
    "a_s",
    "a_r",
    "c_d1",
    "c_d2",
    "ce_d1",
    "ce_d2_ub",
    "sec_lb",
    "mc_c_d1",
    "mc_c_d1_se",
    "mc_c_d2",
    "mc_c_d2_se",
    "mc_ce_d1",
    "mc_ce_d1_se",
    "mc_ce_d2",
    "mc_ce_d2_se",
    "mc_mode_a",
    "mc_mode_a_se",
    "mc_mode_b",
    "mc_mode_b_se",
];

/// One analytical + Monte Carlo row for a scenario point.
fn sweep_row(scn: &Scenario, n: u64, seed: u64) -> Result<Vec<f64>> {
    let params = scn.system_params()?;
    let report = analytical_report(&params)?;
    let terms = estimate_ergodic_terms(&params, n, seed);
    let mode_b = secrecy_mode_b(&params, n, seed);
    Ok(vec![
        scn.rho_db,
        scn.rho_si_db,
        scn.d_se,
        scn.d_re,
        scn.a_s,
        scn.a_r,
        report.c_d1,
        report.c_d2,
        report.ce_d1,
        report.ce_d2_ub,
        report.sec_lb,
        terms.c_d1.mean,
        terms.c_d1.std_err,
        terms.c_d2.mean,
        terms.c_d2.std_err,
        terms.ce_d1.mean,
        terms.ce_d1.std_err,
        terms.ce_d2.mean,
        terms.ce_d2.std_err,
        secrecy_mode_a(&terms),
        secrecy_mode_a_std_err(&terms),
        mode_b.mean,
        mode_b.std_err,
    ])
}

fn sweep_table(points: &[Scenario], n: u64, seed: u64) -> Result<ResultTable> {
    let rows: Vec<Result<Vec<f64>>> = points
        .par_iter()
        .map(|scn| sweep_row(scn, n, seed))
        .collect();
    let mut table = ResultTable::new(SWEEP_COLUMNS.to_vec());
    for row in rows {
        table.push_row(row?);
    }
    table.provenance = Some(Provenance::new(seed, n));
    Ok(table)
}

fn allocation_grid() -> Vec<f64> {
    (1..=24).map(|i| i as f64 * 0.02).collect() // 0.02 ..= 0.48
}

/// Power-allocation sweeps at a fixed transmit SNR: sweep the source split
/// with the relay split pinned at 0.14, then the converse.
fn allocation_sweep_recipe(rho_db: f64) -> Vec<Scenario> {
    let base = Scenario {
        rho_db,
        ..Scenario::default()
    };
    let mut points = Vec::new();
    for &a_s in &allocation_grid() {
        points.push(Scenario {
            a_s,
            a_r: 0.14,
            ..base.clone()
        });
    }
    for &a_r in &allocation_grid() {
        points.push(Scenario {
            a_s: 0.14,
            a_r,
            ..base.clone()
        });
    }
    points
}

/// Eavesdropper-distance sweep with the relay-eavesdropper hop at half the
/// source-eavesdropper distance.
fn eve_distance_recipe() -> Vec<Scenario> {
    (1..=20)
        .map(|i| {
            let d_se = i as f64 * 10.0;
            Scenario {
                d_se,
                d_re: d_se / 2.0,
                ..Scenario::default()
            }
        })
        .collect()
}

/// Transmit-SNR sweep for three eavesdropper geometries (near, mid, far).
fn transmit_power_recipe() -> Vec<Scenario> {
    let mut points = Vec::new();
    for (d_se, d_re) in [(25.0, 20.0), (30.0, 20.0), (40.0, 30.0)] {
        for i in 0..=20 {
            points.push(Scenario {
                rho_db: i as f64 * 2.0,
                d_se,
                d_re,
                ..Scenario::default()
            });
        }
    }
    points
}

/// Residual self-interference sweep at the far-eavesdropper geometry.
fn residual_si_recipe() -> Vec<Scenario> {
    (0..=20)
        .map(|i| Scenario {
            rho_si_db: -30.0 + i as f64 * 2.0,
            ..Scenario::default()
        })
        .collect()
}

/// Per-realization optimizer comparison for one configuration: mean
/// optimized secrecy sum rate vs the fixed-allocation baseline.
fn optimizer_summary_row(scn: &Scenario, n: u64, seed: u64) -> Result<Vec<f64>> {
    let params = scn.system_params()?;
    let acc = accumulate::<4, _>(n, |i| {
        let ch = sample_realization(&params.profile, seed, i);
        let coeffs = DcCoefficients::from_params(&params, &ch);
        let starts = per_realization_starts(seed, i);
        let trace = sca_optimize(&coeffs, DEFAULT_EPS, DEFAULT_MAX_ITER, &starts);
        [
            trace.best_ssr,
            fpapt_baseline(&coeffs),
            (trace.iterates.len() - 1) as f64,
            if trace.converged { 1.0 } else { 0.0 },
        ]
    });
    let ssrot = acc.estimate(0);
    let fpapt = acc.estimate(1);
    let iters = acc.estimate(2);
    let converged = acc.estimate(3);
    Ok(vec![
        scn.rho_db,
        scn.rho_si_db,
        scn.d_se,
        scn.d_re,
        n as f64,
        ssrot.mean,
        ssrot.std_err,
        fpapt.mean,
        fpapt.std_err,
        iters.mean,
        converged.mean,
    ])
}

/// Independent random starts for each realization's multi-start run.
fn per_realization_starts(seed: u64, realization: u64) -> Vec<(f64, f64)> {
    (0..DEFAULT_RANDOM_STARTS as u64)
        .map(|k| {
            let base = realization * 2 * DEFAULT_RANDOM_STARTS as u64;
            (
                0.5 * aux_uniform(seed, 2, base + 2 * k),
                0.5 * aux_uniform(seed, 2, base + 2 * k + 1),
            )
        })
        .collect()
}

fn require_at_least_two(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "at least 2 realizations required (got {n})"
        )));
    }
    Ok(n)
}

/// Run one canned figure recipe (ids 2 through 7).
pub fn run_figure(id: u32, overrides: &Overrides) -> Result<ResultTable> {
    let seed = overrides.seed.unwrap_or(1);
    if let Some(n) = overrides.n {
        require_at_least_two(n)?;
    }
    match id {
        2 => sweep_table(
            &allocation_sweep_recipe(30.0),
            overrides.n.unwrap_or(DEFAULT_SWEEP_N),
            seed,
        ),
        3 => sweep_table(
            &allocation_sweep_recipe(10.0),
            overrides.n.unwrap_or(DEFAULT_SWEEP_N),
            seed,
        ),
        4 => sweep_table(
            &eve_distance_recipe(),
            overrides.n.unwrap_or(DEFAULT_SWEEP_N),
            seed,
        ),
        5 => sweep_table(
            &transmit_power_recipe(),
            overrides.n.unwrap_or(DEFAULT_SWEEP_N),
            seed,
        ),
        6 => sweep_table(
            &residual_si_recipe(),
            overrides.n.unwrap_or(DEFAULT_SWEEP_N),
            seed,
        ),
        7 => {
            let n = overrides.n.unwrap_or(DEFAULT_FIGURE7_N);
            let mut table = ResultTable::new(vec![
                "rho_db",
                "rho_si_db",
                "d_se",
                "d_re",
                "n",
                "ssrot_mean",
                "ssrot_se",
                "fpapt_mean",
                "fpapt_se",
                "mean_iterations",
                "converged_share",
            ]);
            for (d_se, d_re) in [(25.0, 20.0), (40.0, 30.0)] {
                let scn = Scenario {
                    d_se,
                    d_re,
                    ..Scenario::default()
                };
                table.push_row(optimizer_summary_row(&scn, n, seed)?);
            }
            table.provenance = Some(Provenance::new(seed, n));
            Ok(table)
        }
        other => Err(Error::invalid(format!(
            "figure id must be 2..=7 (got {other})"
        ))),
    }
}

/// Scenario points of a sweep (or the scenario itself when no sweep is
/// configured).
fn scenario_points(scn: &Scenario) -> Vec<Scenario> {
    match &scn.sweep {
        Some(sweep) => sweep
            .values()
            .into_iter()
            .map(|v| scn.with_field(sweep.field, v))
            .collect(),
        None => vec![scn.clone()],
    }
}

/// Analytical values over a scenario sweep (no simulation).
pub fn analyze_scenario(scn: &Scenario) -> Result<ResultTable> {
    let points = scenario_points(scn);
    let reports: Vec<Result<(Scenario, AnalyticalReport)>> = points
        .into_par_iter()
        .map(|p| {
            let report = analytical_report(&p.system_params()?)?;
            Ok((p, report))
        })
        .collect();
    let mut table = ResultTable::new(vec![
        "rho_db",
        "rho_si_db",
        "d_se",
        "d_re",
        "a_s",
        "a_r",
        "c_d1",
        "c_d2",
        "ce_d1",
        "ce_d2_ub",
        "sec_lb",
    ]);
    for item in reports {
        let (p, r) = item?;
        table.push_row(vec![
            p.rho_db,
            p.rho_si_db,
            p.d_se,
            p.d_re,
            p.a_s,
            p.a_r,
            r.c_d1,
            r.c_d2,
            r.ce_d1,
            r.ce_d2_ub,
            r.sec_lb,
        ]);
    }
    Ok(table)
}

/// Monte Carlo estimates over a scenario sweep. The secrecy column follows
/// the scenario's estimator mode.
pub fn simulate_scenario(scn: &Scenario, overrides: &Overrides) -> Result<ResultTable> {
    let n = require_at_least_two(overrides.n.unwrap_or_else(|| scn.n_or(1_000_000)))?;
    let seed = overrides.seed.unwrap_or(scn.seed);
    let points = scenario_points(scn);
    let rows: Vec<Result<Vec<f64>>> = points
        .par_iter()
        .map(|p| {
            let params = p.system_params()?;
            let terms = estimate_ergodic_terms(&params, n, seed);
            let (secrecy, secrecy_se) = match p.mc_mode {
                McMode::A => (secrecy_mode_a(&terms), secrecy_mode_a_std_err(&terms)),
                McMode::B => {
                    let est = secrecy_mode_b(&params, n, seed);
                    (est.mean, est.std_err)
                }
            };
            Ok(vec![
                p.rho_db,
                p.rho_si_db,
                p.d_se,
                p.d_re,
                p.a_s,
                p.a_r,
                terms.c_d1.mean,
                terms.c_d1.std_err,
                terms.c_d2.mean,
                terms.c_d2.std_err,
                terms.ce_d1.mean,
                terms.ce_d1.std_err,
                terms.ce_d2.mean,
                terms.ce_d2.std_err,
                secrecy,
                secrecy_se,
            ])
        })
        .collect();
    let mut table = ResultTable::new(vec![
        "rho_db",
        "rho_si_db",
        "d_se",
        "d_re",
        "a_s",
        "a_r",
        "mc_c_d1",
        "mc_c_d1_se",
        "mc_c_d2",
        "mc_c_d2_se",
        "mc_ce_d1",
        "mc_ce_d1_se",
        "mc_ce_d2",
        "mc_ce_d2_se",
        "secrecy",
        "secrecy_se",
    ]);
    for row in rows {
        table.push_row(row?);
    }
    table.provenance = Some(Provenance::new(seed, n));
    Ok(table)
}

/// Per-realization optimizer run: one row per channel realization with the
/// optimized allocation, the optimized secrecy sum rate and the
/// fixed-allocation baseline.
pub fn optimize_scenario(scn: &Scenario, overrides: &Overrides) -> Result<ResultTable> {
    let n = overrides.n.unwrap_or_else(|| scn.n_or(DEFAULT_OPTIMIZE_N));
    let seed = overrides.seed.unwrap_or(scn.seed);
    let params = scn.system_params()?;
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ch = sample_realization(&params.profile, seed, i);
            let coeffs = DcCoefficients::from_params(&params, &ch);
            let starts = per_realization_starts(seed, i);
            let trace = sca_optimize(&coeffs, DEFAULT_EPS, DEFAULT_MAX_ITER, &starts);
            vec![
                i as f64,
                trace.best_a_s,
                trace.best_a_r,
                trace.best_ssr,
                fpapt_baseline(&coeffs),
                (trace.iterates.len() - 1) as f64,
                if trace.converged { 1.0 } else { 0.0 },
            ]
        })
        .collect();
    let mut table = ResultTable::new(vec![
        "realization",
        "a_s_opt",
        "a_r_opt",
        "ssr_opt",
        "ssr_fpapt",
        "iterations",
        "converged",
    ]);
    for row in rows {
        table.push_row(row);
    }
    table.provenance = Some(Provenance::new(seed, n));
    Ok(table)
}
