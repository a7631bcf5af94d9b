//! Closed-form throughput, energy efficiency and delay outage rate for
//! rate-adaptive (RAT) and power-adaptive (PAT) transmission.

pub mod direct;
mod model;
mod pat;
mod rat;

use crate::channel::{GainPartition, StateProbMatrix};
use crate::error::{Error, Result};
use crate::geometry::PassTimeline;

pub use model::{DmaxPolicy, LinkModel, LinkSetup, PartitionSpec};
pub use pat::{pat_dor, pat_first_threshold, pat_power_bounds, pat_report, pat_shannon_gap};
pub use rat::{
    rat_avg_power, rat_dor, rat_ee_bounds, rat_first_threshold, rat_rate_bounds, rat_report, rat_snr_bounds,
    rat_throughput_bounds, rat_wait_rate,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Bandwidth `B`, Hz.
    pub bandwidth: f64,
    /// Receiver noise power `σ²`, watts.
    pub noise_power: f64,
    /// Path-loss exponent `ρ`.
    pub path_loss_exp: f64,
}

impl LinkBudget {
    pub fn new(bandwidth: f64, noise_power: f64, path_loss_exp: f64) -> Result<Self> {
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::invalid("bandwidth", format!("{bandwidth} must be positive")));
        }
        if !(noise_power > 0.0 && noise_power.is_finite()) {
            return Err(Error::invalid("noise_power", format!("{noise_power} must be positive")));
        }
        if !(path_loss_exp >= 2.0 && path_loss_exp.is_finite()) {
            return Err(Error::invalid("path_loss_exp", format!("{path_loss_exp} < 2")));
        }
        Ok(Self { bandwidth, noise_power, path_loss_exp })
    }

    /// Shannon rate `B·log₂(1+snr)`.
    pub fn rate(&self, snr: f64) -> f64 {
        self.bandwidth * snr.ln_1p() / std::f64::consts::LN_2
    }

    /// Path loss `d^ρ` at distance `d`.
    pub fn path_loss(&self, d: f64) -> f64 {
        d.powf(self.path_loss_exp)
    }
}

/// Fixed transmit power, rate adapted to the channel state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatConfig {
    /// `P_T`, watts.
    pub tx_power: f64,
    /// Linear SNR below which nothing is sent.
    pub min_snr: f64,
}

impl RatConfig {
    pub fn new(tx_power: f64, min_snr: f64) -> Result<Self> {
        if !(tx_power > 0.0 && tx_power.is_finite()) {
            return Err(Error::invalid("tx_power", format!("{tx_power} must be positive")));
        }
        if !(min_snr > 0.0 && min_snr.is_finite()) {
            return Err(Error::invalid("min_snr", format!("{min_snr} must be positive")));
        }
        Ok(Self { tx_power, min_snr })
    }
}

/// Fixed rate, transmit power inverted against the channel state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatConfig {
    /// `P_max`, watts.
    pub max_power: f64,
    /// `R_fix`, bit/s.
    pub fixed_rate: f64,
}

impl PatConfig {
    pub fn new(max_power: f64, fixed_rate: f64) -> Result<Self> {
        if !(max_power > 0.0 && max_power.is_finite()) {
            return Err(Error::invalid("max_power", format!("{max_power} must be positive")));
        }
        if !(fixed_rate > 0.0 && fixed_rate.is_finite()) {
            return Err(Error::invalid("fixed_rate", format!("{fixed_rate} must be positive")));
        }
        Ok(Self { max_power, fixed_rate })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    Rat(RatConfig),
    Pat(PatConfig),
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Rat(_) => "rat",
            Scheme::Pat(_) => "pat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficSpec {
    /// Packet size `D`, bits.
    pub packet_bits: f64,
    /// Delay threshold `T_th`, seconds.
    pub delay_threshold: f64,
}

impl TrafficSpec {
    pub fn new(packet_bits: f64, delay_threshold: f64) -> Result<Self> {
        if !(packet_bits > 0.0 && packet_bits.is_finite()) {
            return Err(Error::invalid("packet_bits", format!("{packet_bits} must be positive")));
        }
        if !(delay_threshold >= 0.0) {
            return Err(Error::invalid("delay_threshold", format!("{delay_threshold} must be >= 0")));
        }
        Ok(Self { packet_bits, delay_threshold })
    }

    /// Transmission time of one packet at `rate`; infinite for a zero rate.
    pub fn airtime(&self, rate: f64) -> f64 {
        if rate > 0.0 {
            self.packet_bits / rate
        } else {
            f64::INFINITY
        }
    }
}

/// Analytic results for one scheme. RAT brackets throughput and EE; PAT has
/// a single throughput and brackets power and EE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeReport {
    pub throughput_lo: f64,
    pub throughput_hi: f64,
    pub avg_power_lo: f64,
    pub avg_power_hi: f64,
    pub ee_lo: f64,
    pub ee_hi: f64,
    pub dor: f64,
    /// Average fade duration below the first threshold, seconds.
    pub lambda: f64,
}

/// Unit step with `U(0) = 1`.
pub fn unit_step(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

pub(crate) fn check_dims(part: &GainPartition, tl: &PassTimeline, probs: &StateProbMatrix) -> Result<()> {
    if probs.k_states() != part.k() {
        return Err(Error::DimensionMismatch { expected: part.k(), got: probs.k_states() });
    }
    if probs.n_slots() != tl.n_slots() {
        return Err(Error::DimensionMismatch { expected: tl.n_slots(), got: probs.n_slots() });
    }
    Ok(())
}

pub(crate) fn check_state(part: &GainPartition, k: usize) -> Result<()> {
    if k == 0 || k > part.k() {
        return Err(Error::IndexOutOfRange { what: "state", index: k, len: part.k() });
    }
    Ok(())
}

/// Upper edge of state `k` as a power gain: `μ_k²`, or the conditional
/// mean of the top state when it is known.
pub(crate) fn upper_gain(part: &GainPartition, k: usize) -> f64 {
    if k == part.k() {
        part.top_gain_mean().unwrap_or(f64::INFINITY)
    } else {
        part.mu(k).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_is_closed_at_zero() {
        assert_eq!(unit_step(0.0), 1.0);
        assert_eq!(unit_step(-1e-300), 0.0);
        assert_eq!(unit_step(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(LinkBudget::new(0.0, 1.0, 2.0).is_err());
        assert!(LinkBudget::new(1.0, 1.0, 1.5).is_err());
        assert!(RatConfig::new(-1.0, 1.0).is_err());
        assert!(PatConfig::new(1.0, 0.0).is_err());
        assert!(TrafficSpec::new(1.0, -1e-3).is_err());
        assert!(TrafficSpec::new(1.0, 0.0).is_ok());
    }

    #[test]
    fn shannon_rate() {
        let b = LinkBudget::new(60e6, 1e-9, 2.0).unwrap();
        assert_eq!(b.rate(0.0), 0.0);
        assert!((b.rate(1.0) - 60e6).abs() < 1e-6);
        assert!((b.rate(3.0) - 120e6).abs() < 1e-6);
    }
}
