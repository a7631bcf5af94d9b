//! Delay outage rate evaluated straight from its definition: the per-arrival
//! outage probability `DOR(t)` averaged over the arrival time by quadrature,
//! with the waiting-time density integrated numerically across every slot
//! change. These routes share no algebra with the closed forms in
//! [`rat_dor`](super::rat_dor) and [`pat_dor`](super::pat_dor), which makes
//! them a cross-check of the uniform-slot argument behind those forms.

use super::{check_dims, rat_rate_bounds, rat_wait_rate, unit_step, LinkBudget, PatConfig, RatConfig, TrafficSpec};
use crate::channel::{GainPartition, StateProbMatrix};
use crate::error::{Error, Result};
use crate::geometry::PassTimeline;
use crate::quad;

const TOL: f64 = 1e-13;

// ∫_a^b (1/λ)·exp(−w/λ) dw by quadrature
fn wait_mass(lambda: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    quad::integrate(|w| (-w / lambda).exp() / lambda, a, b, TOL * 1e-2, TOL).value
}

/// Rate-adaptive DOR from the time average of `DOR_R(t)`.
#[allow(clippy::too_many_arguments)]
pub fn rat_dor_direct(
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
    let n_slots = tl.n_slots();
    let slot = tl.slot_len();
    let t_th = traffic.delay_threshold;
    // latest wait after which the packet still meets the deadline, per slot
    let cutoff: Vec<f64> = (1..=n_slots)
        .map(|m| Ok(t_th - traffic.airtime(rat_wait_rate(budget, rat, part, tl, m)?)))
        .collect::<Result<_>>()?;

    // Pr{T_W + D/R_2(slot after the wait) ≤ T_th} for an arrival at t
    let success_after_fade = |t: f64| -> f64 {
        let mut total = 0.0;
        let mut lo = 0.0;
        while lo < t_th {
            // next slot boundary strictly after t + lo
            let boundary = ((t + lo) / slot).floor() * slot + slot - t;
            let hi = boundary.min(t_th).max(lo);
            let s = tl.slot_at(t + 0.5 * (lo + hi));
            total += wait_mass(lambda, lo, hi.min(cutoff[s - 1]));
            if hi <= lo {
                break;
            }
            lo = hi;
        }
        total
    };

    let reach = (t_th / slot).ceil() as usize + 1;
    let mut acc = 0.0;
    for n in 1..=n_slots {
        let start = (n - 1) as f64 * slot;
        let end = n as f64 * slot;
        let mut no_wait = 0.0;
        for k in 2..=part.k() {
            let (r_lo, _) = rat_rate_bounds(budget, rat, part, tl, k, n)?;
            no_wait += probs.get(k, n) * unit_step(t_th - traffic.airtime(r_lo));
        }
        // kinks of the fade term: arrivals whose wait window meets a slot
        // boundary exactly at a cutoff or at the deadline
        let mut points = vec![start, end];
        for j in n..=n + reach {
            let edge = j as f64 * slot;
            let reached = (j % n_slots) + 1;
            for x in [t_th, cutoff[reached - 1], cutoff[(j + n_slots - 1) % n_slots]] {
                let t = edge - x;
                if t > start && t < end {
                    points.push(t);
                }
            }
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        let fade = quad::integrate_pieces(success_after_fade, &points, TOL, TOL).value / slot;
        acc += 1.0 - no_wait - probs.get(1, n) * fade;
    }
    Ok((acc / n_slots as f64).clamp(0.0, 1.0))
}

/// Power-adaptive DOR from the time average of `DOR_P(t)`.
pub fn pat_dor_direct(
    pat: &PatConfig,
    tl: &PassTimeline,
    probs: &StateProbMatrix,
    traffic: &TrafficSpec,
    lambda: f64,
) -> Result<f64> {
    if probs.n_slots() != tl.n_slots() {
        return Err(Error::DimensionMismatch { expected: tl.n_slots(), got: probs.n_slots() });
    }
    if !(lambda > 0.0) {
        return Err(Error::invalid("lambda", format!("{lambda} must be positive")));
    }
    let t_th = traffic.delay_threshold;
    let airtime = traffic.airtime(pat.fixed_rate);
    let ok = unit_step(t_th - airtime);
    let after_fade = wait_mass(lambda, 0.0, t_th - airtime);
    let dor_at = |t: f64| {
        let col = probs.column(tl.slot_at(t));
        let active: f64 = col[1..].iter().sum();
        1.0 - active * ok - col[0] * after_fade
    };
    let points: Vec<f64> = (0..=tl.n_slots()).map(|n| n as f64 * tl.slot_len()).collect();
    let total = quad::integrate_pieces(dor_at, &points, TOL, TOL).value;
    Ok((total / tl.span()).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::super::{pat_dor, rat_dor};
    use super::*;

    fn setup() -> (LinkBudget, RatConfig, GainPartition, PassTimeline, StateProbMatrix) {
        let b = LinkBudget::new(60e6, 1e-12, 2.0).unwrap();
        let rat = RatConfig::new(0.05, 1.0).unwrap();
        let part = GainPartition::new(vec![0.0, 0.5, 1.0]).unwrap();
        let tl = PassTimeline::from_slots(1.0, vec![600e3, 500e3, 600e3], vec![700e3, 600e3, 700e3]).unwrap();
        let col = vec![0.3, 0.4, 0.3];
        let probs = StateProbMatrix::from_columns(&[col.clone(), col.clone(), col]).unwrap();
        (b, rat, part, tl, probs)
    }

    #[test]
    fn rat_direct_matches_closed_form_across_slot_changes() {
        let (b, rat, part, tl, probs) = setup();
        for t_th in [0.0, 0.02, 0.4, 1.3, 2.7, 10.0] {
            let traffic = TrafficSpec::new(5e5, t_th).unwrap();
            let closed = rat_dor(&b, &rat, &part, &tl, &probs, &traffic, 0.7).unwrap();
            let direct = rat_dor_direct(&b, &rat, &part, &tl, &probs, &traffic, 0.7).unwrap();
            assert!((closed - direct).abs() < 1e-9, "T_th={t_th}: {closed} vs {direct}");
        }
    }

    #[test]
    fn pat_direct_matches_closed_form() {
        let (_, _, _, tl, probs) = setup();
        let pat = PatConfig::new(10.0, 600e6).unwrap();
        for t_th in [0.0, 5e5 / 600e6, 1e-3, 0.5, 3.0] {
            let traffic = TrafficSpec::new(5e5, t_th).unwrap();
            let closed = pat_dor(&pat, &probs, &traffic, 0.7).unwrap();
            let direct = pat_dor_direct(&pat, &tl, &probs, &traffic, 0.7).unwrap();
            assert!((closed - direct).abs() < 1e-9, "T_th={t_th}: {closed} vs {direct}");
        }
    }
}
