use super::{check_dims, check_state, upper_gain, LinkBudget, PatConfig, SchemeReport, TrafficSpec};
use crate::channel::{GainPartition, StateProbMatrix};
use crate::error::{Error, Result};
use crate::geometry::PassTimeline;

/// Relative slack before a computed power counts as exceeding `P_max`, so
/// that the state-2 edge at the farthest slot survives rounding.
const CAP_SLACK: f64 = 1e-9;

/// SNR needed for the fixed rate, `2^{R_fix/B} − 1`.
pub fn pat_shannon_gap(budget: &LinkBudget, pat: &PatConfig) -> f64 {
    (pat.fixed_rate / budget.bandwidth * std::f64::consts::LN_2).exp_m1()
}

/// First amplitude threshold `u_1 = σ·sqrt((2^{R_fix/B}−1)·d_max^ρ / P_max)`.
pub fn pat_first_threshold(budget: &LinkBudget, pat: &PatConfig, d_max: f64) -> f64 {
    budget.noise_power.sqrt() * (pat_shannon_gap(budget, pat) * budget.path_loss(d_max) / pat.max_power).sqrt()
}

/// Transmit-power bracket `(lower, upper)` of state `k` in slot `n`, using
/// the slot's largest distance. A value above `P_max` is not transmitted
/// and becomes 0.
pub fn pat_power_bounds(
    budget: &LinkBudget,
    pat: &PatConfig,
    part: &GainPartition,
    tl: &PassTimeline,
    k: usize,
    n: usize,
) -> Result<(f64, f64)> {
    check_state(part, k)?;
    let (_, d) = tl.slot(n)?;
    if k == 1 {
        return Ok((0.0, 0.0));
    }
    let need = budget.noise_power * budget.path_loss(d) * pat_shannon_gap(budget, pat);
    let cap = |p: f64| if p > pat.max_power * (1.0 + CAP_SLACK) { 0.0 } else { p };
    let lower = cap(need / upper_gain(part, k));
    let upper = cap(need / part.mu(k - 1).powi(2));
    Ok((lower, upper))
}

/// Delay outage rate: certain outage below the knee `T_th < D/R_fix`, else
/// only fades that outlast the slack `T_th − D/R_fix` fail.
pub fn pat_dor(pat: &PatConfig, probs: &StateProbMatrix, traffic: &TrafficSpec, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("lambda", format!("{lambda} must be positive")));
    }
    let slack = traffic.delay_threshold - traffic.airtime(pat.fixed_rate);
    if slack < 0.0 {
        return Ok(1.0);
    }
    let faded: f64 = probs.columns().map(|col| col[0]).sum::<f64>() / probs.n_slots() as f64;
    Ok((faded * (-slack / lambda).exp()).clamp(0.0, 1.0))
}

/// Throughput, power bracket, EE bracket and DOR for the fixed-rate scheme.
#[allow(clippy::too_many_arguments)]
pub fn pat_report(
    budget: &LinkBudget,
    pat: &PatConfig,
    part: &GainPartition,
    tl: &PassTimeline,
    probs: &StateProbMatrix,
    traffic: &TrafficSpec,
    lambda: f64,
) -> Result<SchemeReport> {
    check_dims(part, tl, probs)?;
    let n_slots = tl.n_slots() as f64;
    let (mut rate, mut p_lo, mut p_hi) = (0.0, 0.0, 0.0);
    for n in 1..=tl.n_slots() {
        for k in 2..=part.k() {
            let p = probs.get(k, n);
            let (lo, hi) = pat_power_bounds(budget, pat, part, tl, k, n)?;
            rate += p * pat.fixed_rate;
            p_lo += p * lo;
            p_hi += p * hi;
        }
    }
    if !(p_hi > 0.0) {
        return Err(Error::ZeroPower);
    }
    let ee_hi = if p_lo > 0.0 { rate / p_lo } else { f64::INFINITY };
    Ok(SchemeReport {
        throughput_lo: rate / n_slots,
        throughput_hi: rate / n_slots,
        avg_power_lo: p_lo / n_slots,
        avg_power_hi: p_hi / n_slots,
        ee_lo: rate / p_hi,
        ee_hi,
        dor: pat_dor(pat, probs, traffic, lambda)?,
        lambda,
    })
}
