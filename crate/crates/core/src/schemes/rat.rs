use super::{check_dims, check_state, unit_step, upper_gain, LinkBudget, RatConfig, SchemeReport, TrafficSpec};
use crate::channel::{GainPartition, StateProbMatrix};
use crate::error::{Error, Result};
use crate::geometry::PassTimeline;

/// First amplitude threshold `μ_1 = σ·sqrt(γ_min·d_max^ρ / P_T)`: below it
/// the SNR at the farthest point of the pass drops under `γ_min`.
pub fn rat_first_threshold(budget: &LinkBudget, rat: &RatConfig, d_max: f64) -> f64 {
    budget.noise_power.sqrt() * (rat.min_snr * budget.path_loss(d_max) / rat.tx_power).sqrt()
}

/// Received-SNR bracket of state `k` in slot `n` (both 1-based). The lower
/// edge pairs `μ_{k−1}` with the slot's largest distance, the upper edge
/// pairs `μ_k` with the smallest. State 1 carries no traffic.
pub fn rat_snr_bounds(
    budget: &LinkBudget,
    rat: &RatConfig,
    part: &GainPartition,
    tl: &PassTimeline,
    k: usize,
    n: usize,
) -> Result<(f64, f64)> {
    check_state(part, k)?;
    let (d_min, d_max) = tl.slot(n)?;
    if k == 1 {
        return Ok((0.0, 0.0));
    }
    let scale = rat.tx_power / budget.noise_power;
    let lo = scale * part.mu(k - 1).powi(2) / budget.path_loss(d_max);
    let hi = scale * upper_gain(part, k) / budget.path_loss(d_min);
    Ok((lo, hi))
}

/// Shannon rates at the two SNR edges of state `k`, slot `n`.
pub fn rat_rate_bounds(
    budget: &LinkBudget,
    rat: &RatConfig,
    part: &GainPartition,
    tl: &PassTimeline,
    k: usize,
    n: usize,
) -> Result<(f64, f64)> {
    let (lo, hi) = rat_snr_bounds(budget, rat, part, tl, k, n)?;
    Ok((budget.rate(lo), budget.rate(hi)))
}

/// Rate `R_{2,m}` used once a fade ends and the channel enters state 2 in
/// slot `m`.
pub fn rat_wait_rate(budget: &LinkBudget, rat: &RatConfig, part: &GainPartition, tl: &PassTimeline, m: usize) -> Result<f64> {
    Ok(rat_rate_bounds(budget, rat, part, tl, 2, m)?.0)
}

/// Average throughput bracket `(1/N)·Σ_n Σ_k π_{k,n}·R_{k,n}`, bit/s.
pub fn rat_throughput_bounds(
    budget: &LinkBudget,
    rat: &RatConfig,
    part: &GainPartition,
    tl: &PassTimeline,
    probs: &StateProbMatrix,
) -> Result<(f64, f64)> {
    check_dims(part, tl, probs)?;
    let (mut lo, mut hi) = (0.0, 0.0);
    for n in 1..=tl.n_slots() {
        for k in 2..=part.k() {
            let p = probs.get(k, n);
            if p == 0.0 {
                continue;
            }
            let (r_lo, r_hi) = rat_rate_bounds(budget, rat, part, tl, k, n)?;
            lo += p * r_lo;
            hi += p * r_hi;
        }
    }
    let n = tl.n_slots() as f64;
    Ok((lo / n, hi / n))
}

/// Average transmit power: `P_T` whenever the channel is out of state 1.
pub fn rat_avg_power(rat: &RatConfig, probs: &StateProbMatrix) -> f64 {
    let active: f64 = probs.columns().map(|col| 1.0 - col[0]).sum();
    rat.tx_power * active / probs.n_slots() as f64
}

/// Energy-efficiency bracket in bit/J.
pub fn rat_ee_bounds(
    budget: &LinkBudget,
    rat: &RatConfig,
    part: &GainPartition,
    tl: &PassTimeline,
    probs: &StateProbMatrix,
) -> Result<(f64, f64)> {
    let (lo, hi) = rat_throughput_bounds(budget, rat, part, tl, probs)?;
    let power = rat_avg_power(rat, probs);
    if !(power > 0.0) {
        return Err(Error::ZeroPower);
    }
    Ok((lo / power, hi / power))
}

/// Pass-averaged delay outage rate. Packets arriving outside state 1 go out
/// at the state's lower-edge rate; packets arriving in a fade wait an
/// exponential time with mean `lambda` and then use `R_{2,m}`, with the slot
/// `m` uniform over the pass.
#[allow(clippy::too_many_arguments)]
pub fn rat_dor(
    budget: &LinkBudget,
    rat: &RatConfig,
    part: &GainPartition,
    tl: &PassTimeline,
    probs: &StateProbMatrix,
    traffic: &TrafficSpec,
    lambda: f64,
) -> Result<f64> {
    check_dims(part, tl, probs)?;
    if !(lambda > 0.0) {
        return Err(Error::invalid("lambda", format!("{lambda} must be positive")));
    }
    let t_th = traffic.delay_threshold;
    let n_slots = tl.n_slots();
    let mut delivered = 0.0;
    for n in 1..=n_slots {
        for k in 2..=part.k() {
            let (r_lo, _) = rat_rate_bounds(budget, rat, part, tl, k, n)?;
            delivered += probs.get(k, n) * unit_step(t_th - traffic.airtime(r_lo));
        }
    }
    for m in 1..=n_slots {
        let slack = t_th - traffic.airtime(rat_wait_rate(budget, rat, part, tl, m)?);
        if slack >= 0.0 {
            delivered += probs.get(1, m) * -(-slack / lambda).exp_m1();
        }
    }
    Ok((1.0 - delivered / n_slots as f64).clamp(0.0, 1.0))
}

/// Throughput, power, EE and DOR in one report.
#[allow(clippy::too_many_arguments)]
pub fn rat_report(
    budget: &LinkBudget,
    rat: &RatConfig,
    part: &GainPartition,
    tl: &PassTimeline,
    probs: &StateProbMatrix,
    traffic: &TrafficSpec,
    lambda: f64,
) -> Result<SchemeReport> {
    let (throughput_lo, throughput_hi) = rat_throughput_bounds(budget, rat, part, tl, probs)?;
    let power = rat_avg_power(rat, probs);
    let (ee_lo, ee_hi) = rat_ee_bounds(budget, rat, part, tl, probs)?;
    let dor = rat_dor(budget, rat, part, tl, probs, traffic, lambda)?;
    Ok(SchemeReport {
        throughput_lo,
        throughput_hi,
        avg_power_lo: power,
        avg_power_hi: power,
        ee_lo,
        ee_hi,
        dor,
        lambda,
    })
}
