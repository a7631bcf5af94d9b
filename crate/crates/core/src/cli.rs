//! Scenario-driven pipelines behind the `leolink` binary.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::montecarlo::{ks_critical, ks_statistic, sample_gains, simulate, state_counts, Estimate, SimResult};
use crate::scenario::{Scenario, SweepSpec};
use crate::schemes::{LinkModel, Scheme, SchemeReport};

/// Analytic columns of a sweep, after the swept value.
pub const ANALYTIC_COLUMNS: [&str; 5] = ["throughput_lo_bps", "throughput_hi_bps", "ee_lo_bpj", "ee_hi_bpj", "dor"];
/// Monte-Carlo columns; left empty unless simulation was requested.
pub const SIM_COLUMNS: [&str; 4] = ["sim_rate_bps", "sim_rate_se", "sim_dor", "sim_dor_se"];

pub fn run_analyze(scn: &Scenario) -> Result<SchemeReport> {
    scn.model()?.analyze()
}

/// `key = value` text report of [`run_analyze`] plus the derived pieces it
/// rests on.
pub fn analyze_report(scn: &Scenario) -> Result<String> {
    let model = scn.model()?;
    let r = model.analyze()?;
    let tl = model.timeline();
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    line("scheme", scn.link.scheme.name().into());
    line("n_slots", tl.n_slots().to_string());
    line("service_time_s", tl.service_time().to_string());
    line("d_max_m", model.d_max().to_string());
    let thresholds: Vec<String> = model.partition().thresholds()[1..].iter().map(f64::to_string).collect();
    line("thresholds", thresholds.join(", "));
    line("state_probs", model.probs().column(1).iter().map(f64::to_string).collect::<Vec<_>>().join(", "));
    line("lambda_s", r.lambda.to_string());
    line("throughput_lo_bps", r.throughput_lo.to_string());
    line("throughput_hi_bps", r.throughput_hi.to_string());
    line("avg_power_lo_w", r.avg_power_lo.to_string());
    line("avg_power_hi_w", r.avg_power_hi.to_string());
    line("ee_lo_bpj", r.ee_lo.to_string());
    line("ee_hi_bpj", r.ee_hi.to_string());
    line("dor", r.dor.to_string());
    Ok(out)
}

/// A CSV-ready table of formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    /// Cell `col` of every row parsed as `f64`; empty cells are `None`.
    pub fn column(&self, col: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| h == col)?;
        Some(self.rows.iter().map(|r| r[i].parse().ok()).collect())
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One row per sweep value, in input order.
pub fn run_sweep(scn: &Scenario, sweep: &SweepSpec, with_sim: bool) -> Result<Table> {
    let points: Vec<Scenario> = sweep.values.iter().map(|v| scn.with_value(&sweep.key, v)).collect::<Result<_>>()?;
    let rows = points
        .par_iter()
        .map(|point| {
            let model = point.model()?;
            let r = model.analyze()?;
            let swept = point.doc().number(&sweep.key)?;
            let mut row = vec![cell(swept)];
            row.extend([r.throughput_lo, r.throughput_hi, r.ee_lo, r.ee_hi, r.dor].map(|x| x.to_string()));
            let sim = if with_sim { Some(simulate(&model, &point.sim)?) } else { None };
            let rate = sim.as_ref().and_then(|s| s.mean_rate);
            let dor = sim.as_ref().and_then(|s| s.empirical_dor);
            row.extend([rate.map(|e| e.mean), rate.map(|e| e.se), dor.map(|e| e.mean), dor.map(|e| e.se)].map(cell));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut header = vec![sweep.column()];
    header.extend(ANALYTIC_COLUMNS.iter().chain(&SIM_COLUMNS).map(|s| s.to_string()));
    Ok(Table { header, rows })
}

/// Single-row Monte-Carlo summary of the scenario.
pub fn run_simulate(scn: &Scenario) -> Result<Table> {
    let model = scn.model()?;
    let s = simulate(&model, &scn.sim)?;
    let header = [
        "scheme", "n_samples", "seed", "rng", "sim_rate_bps", "sim_rate_se", "sim_power_w", "sim_power_se", "sim_ee_bpj",
        "sim_ee_se", "sim_dor", "sim_dor_se",
    ];
    let mut row = vec![scn.link.scheme.name().to_string(), s.n_samples.to_string(), scn.sim.seed.to_string(), s.rng.into()];
    for e in [s.mean_rate, s.mean_power, s.ee, s.empirical_dor] {
        row.push(cell(e.map(|e| e.mean)));
        row.push(cell(e.map(|e| e.se)));
    }
    Ok(Table { header: header.map(String::from).to_vec(), rows: vec![row] })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of [`run_validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub checks: Vec<Check>,
}

impl Validation {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{} {}: {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect()
    }
}

/// Standard error for a 3σ check of a simulated probability against `p`.
/// The null binomial error keeps estimates pinned at 0 or 1 from yielding a
/// zero-width interval.
pub fn dor_se(est: &Estimate, p: f64, n: u64) -> f64 {
    let null = (p * (1.0 - p) / n as f64).sqrt();
    est.se.max(null)
}

/// Cross-checks the analytic pipeline against its independent routes:
/// probability columns, sampled state frequencies, a KS test of the gain
/// sampler, the direct DOR integral and Monte-Carlo brackets.
pub fn run_validate(scn: &Scenario) -> Result<Validation> {
    let model = scn.model()?;
    let report = model.analyze()?;
    let n = scn.sim.n_samples;
    let seed = scn.sim.seed;
    let mut checks = Vec::new();

    let worst = model.probs().columns().map(|c| (c.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
    checks.push(Check { name: "column_sums", pass: worst <= 1e-9, detail: format!("max |sum - 1| = {worst:e}") });

    checks.push(state_frequency_check(&model, n, seed));
    checks.push(ks_check(&model, n, seed.wrapping_add(2)));

    let direct = model.dor_direct()?;
    let gap = (direct - report.dor).abs();
    checks.push(Check {
        name: "dor_direct",
        pass: gap <= 1e-9,
        detail: format!("closed {} vs direct {direct} (gap {gap:e})", report.dor),
    });

    let sim = simulate(&model, &scn.sim)?;
    checks.extend(sim_checks(&report, &sim, &model));
    Ok(Validation { checks })
}

fn state_frequency_check(model: &LinkModel, n: u64, seed: u64) -> Check {
    let counts = state_counts(&model.setup().fading, model.partition(), n, seed);
    let probs = model.probs().column(1);
    let mut worst: f64 = 0.0;
    for (&c, &p) in counts.iter().zip(probs) {
        let se = (p * (1.0 - p) / n as f64).sqrt();
        let dev = (c as f64 / n as f64 - p).abs();
        let z = if se > 0.0 { dev / se } else if dev == 0.0 { 0.0 } else { f64::INFINITY };
        worst = worst.max(z);
    }
    Check { name: "state_frequencies", pass: worst <= 3.0, detail: format!("max |z| = {worst:.3} over {n} draws") }
}

fn ks_check(model: &LinkModel, n: u64, seed: u64) -> Check {
    let fading = &model.setup().fading;
    let mut gains = sample_gains(fading, n, seed);
    gains.sort_by(f64::total_cmp);
    let d = ks_statistic(&fading.cdf_sorted(&gains));
    let crit = ks_critical(gains.len(), 0.01);
    Check { name: "ks_gain_sampler", pass: d <= crit, detail: format!("D = {d:.5}, critical {crit:.5} at alpha 0.01") }
}

fn sim_checks(r: &SchemeReport, sim: &SimResult, model: &LinkModel) -> Vec<Check> {
    let mut out = Vec::new();
    let bracket = |name, est: Option<Estimate>, lo: f64, hi: f64| match est {
        Some(e) => Check {
            name,
            pass: e.within(lo, hi, 3.0),
            detail: format!("{} ± {} against [{lo}, {hi}]", e.mean, e.se),
        },
        None => Check { name, pass: false, detail: "no estimate".into() },
    };
    out.push(bracket("sim_rate_bracket", sim.mean_rate, r.throughput_lo, r.throughput_hi));
    out.push(bracket("sim_ee_bracket", sim.ee, r.ee_lo, r.ee_hi));
    if matches!(model.setup().scheme, Scheme::Pat(_)) {
        out.push(bracket("sim_power_bracket", sim.mean_power, r.avg_power_lo, r.avg_power_hi));
    }
    out.push(match sim.empirical_dor {
        Some(e) => {
            let se = dor_se(&e, r.dor, sim.n_samples);
            Check {
                name: "sim_dor",
                pass: (e.mean - r.dor).abs() <= 3.0 * se,
                detail: format!("{} ± {se} against {}", e.mean, r.dor),
            }
        }
        None => Check { name: "sim_dor", pass: false, detail: "no estimate".into() },
    });
    out
}
