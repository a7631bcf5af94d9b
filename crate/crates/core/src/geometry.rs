//! Pass geometry of a single satellite over a fixed terminal and its
//! discretization into equal time slots.
//!
//! The sub-satellite point moves along a straight ground track at speed
//! `v = v_sat·Re/(Re+H)`. The terminal sits `d_P` away from the track, and
//! the along-track offset between the sub-satellite point and the terminal's
//! projection runs from `d_Δ` down to zero and back to `d_Δ` over the service
//! time `T_s = 2·d_Δ/v`. The slant range is
//! `d(t) = sqrt((d_Δ − v·t)² + d_P² + H²)`.

use log::warn;

use crate::error::{Error, Result};

/// Standard gravitational parameter of the Earth, m³/s².
pub const EARTH_MU: f64 = 398_600.441_8e9;

/// Mean Earth radius, m.
pub const EARTH_RADIUS: f64 = 6_371e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassGeometry {
    /// Earth radius `Re`, m.
    pub earth_radius: f64,
    /// Orbit height `H`, m.
    pub orbit_height: f64,
    /// Coverage radius `R` of one satellite, m.
    pub coverage_radius: f64,
    /// Along-track half length `d_Δ` of the pass, m.
    pub half_track: f64,
    /// Orbital speed `v_sat`, m/s.
    pub sat_speed: f64,
    /// Terminal distance `d_P` from the ground track, m.
    pub terminal_offset: f64,
    /// Path-loss exponent `ρ`.
    pub path_loss_exp: f64,
}

/// Which distance range to report from [`PassGeometry::distance_range`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceEnvelope {
    /// The fixed terminal at `d_P`: `[sqrt(d_P²+H²), sqrt(d_Δ²+d_P²+H²)]`.
    FixedTerminal,
    /// Any terminal inside the coverage disc: `[H, sqrt(H²+R²)]`.
    AllTerminals,
}

/// Circular-orbit speed `sqrt(μ/(Re+H))`.
pub fn circular_orbit_speed(earth_radius: f64, orbit_height: f64) -> f64 {
    (EARTH_MU / (earth_radius + orbit_height)).sqrt()
}

/// Half the ground-track spacing between neighbouring satellites of one
/// plane, `π·Re/n`, usable as `d_Δ` for an evenly filled plane.
pub fn half_track_for_plane(earth_radius: f64, sats_per_plane: u32) -> f64 {
    std::f64::consts::PI * earth_radius / f64::from(sats_per_plane)
}

impl PassGeometry {
    pub fn validated(self) -> Result<Self> {
        let positive = [
            ("earth_radius", self.earth_radius),
            ("orbit_height", self.orbit_height),
            ("coverage_radius", self.coverage_radius),
            ("half_track", self.half_track),
            ("sat_speed", self.sat_speed),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("{v} must be positive and finite")));
            }
        }
        if !(self.terminal_offset >= 0.0 && self.terminal_offset.is_finite()) {
            return Err(Error::invalid("terminal_offset", "must be >= 0"));
        }
        if !(self.path_loss_exp >= 2.0 && self.path_loss_exp.is_finite()) {
            return Err(Error::invalid("path_loss_exp", format!("{} < 2", self.path_loss_exp)));
        }
        Ok(self)
    }

    /// Ground speed of the sub-satellite point.
    pub fn sub_point_speed(&self) -> f64 {
        self.sat_speed * self.earth_radius / (self.earth_radius + self.orbit_height)
    }

    /// Time the terminal spends in coverage, `2·d_Δ/v`.
    pub fn service_duration(&self) -> f64 {
        2.0 * self.half_track / self.sub_point_speed()
    }

    /// Instant of closest approach, `d_Δ/v`.
    pub fn closest_approach_time(&self) -> f64 {
        self.half_track / self.sub_point_speed()
    }

    pub fn distance_at(&self, t: f64) -> Result<f64> {
        let service_time = self.service_duration();
        if !(0.0..=service_time).contains(&t) {
            return Err(Error::OutOfPass { t, service_time });
        }
        Ok(self.distance_unchecked(t))
    }

    fn distance_unchecked(&self, t: f64) -> f64 {
        let along = self.half_track - self.sub_point_speed() * t;
        (along * along + self.terminal_offset.powi(2) + self.orbit_height.powi(2)).sqrt()
    }

    pub fn distance_range(&self, envelope: DistanceEnvelope) -> (f64, f64) {
        let h2 = self.orbit_height.powi(2);
        match envelope {
            DistanceEnvelope::FixedTerminal => {
                let base = self.terminal_offset.powi(2) + h2;
                (base.sqrt(), (base + self.half_track.powi(2)).sqrt())
            }
            DistanceEnvelope::AllTerminals => {
                (self.orbit_height, (h2 + self.coverage_radius.powi(2)).sqrt())
            }
        }
    }

    /// Splits the pass into `floor(T_s/T_slot)` slots and records the
    /// distance extremes inside each one. A fractional last slot is dropped.
    pub fn build_timeline(&self, slot_len: f64) -> Result<PassTimeline> {
        let service_time = self.service_duration();
        if !(slot_len > 0.0 && slot_len.is_finite()) {
            return Err(Error::invalid("slot_len", format!("{slot_len} must be positive")));
        }
        if slot_len > service_time * (1.0 + 1e-12) {
            return Err(Error::SlotTooLong { slot_len, service_time });
        }
        let ratio = service_time / slot_len;
        // absorb rounding when T_s is an exact multiple of the slot length
        let n_slots = ((ratio * (1.0 + 1e-12)).floor() as usize).max(1);
        let remainder = service_time - n_slots as f64 * slot_len;
        if remainder > 1e-9 * service_time {
            warn!(
                "service time {service_time:.6} s is not a multiple of the slot length \
                 {slot_len} s; discarding the trailing {remainder:.6} s"
            );
        }

        let t_min = self.closest_approach_time();
        let floor = (self.terminal_offset.powi(2) + self.orbit_height.powi(2)).sqrt();
        let (dist_min, dist_max) = (0..n_slots)
            .map(|i| {
                let t0 = i as f64 * slot_len;
                let t1 = t0 + slot_len;
                let d0 = self.distance_unchecked(t0);
                let d1 = self.distance_unchecked(t1);
                let lo = if t0 < t_min && t_min < t1 { floor } else { d0.min(d1) };
                (lo, d0.max(d1))
            })
            .unzip();

        Ok(PassTimeline { service_time, slot_len, n_slots, dist_min, dist_max })
    }
}

/// The discretized pass: per-slot minimum and maximum slant range.
#[derive(Debug, Clone, PartialEq)]
pub struct PassTimeline {
    service_time: f64,
    slot_len: f64,
    n_slots: usize,
    dist_min: Vec<f64>,
    dist_max: Vec<f64>,
}

impl PassTimeline {
    /// Builds a timeline from explicit per-slot distance brackets.
    pub fn from_slots(slot_len: f64, dist_min: Vec<f64>, dist_max: Vec<f64>) -> Result<Self> {
        if dist_min.is_empty() || dist_min.len() != dist_max.len() {
            return Err(Error::DimensionMismatch { expected: dist_min.len(), got: dist_max.len() });
        }
        if !(slot_len > 0.0) {
            return Err(Error::invalid("slot_len", "must be positive"));
        }
        if dist_min.iter().zip(&dist_max).any(|(lo, hi)| !(*lo > 0.0 && lo <= hi)) {
            return Err(Error::invalid("dist_min", "need 0 < min <= max in every slot"));
        }
        let n_slots = dist_min.len();
        Ok(Self { service_time: n_slots as f64 * slot_len, slot_len, n_slots, dist_min, dist_max })
    }

    pub fn service_time(&self) -> f64 {
        self.service_time
    }

    pub fn slot_len(&self) -> f64 {
        self.slot_len
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    /// Covered duration `N·T_slot`.
    pub fn span(&self) -> f64 {
        self.n_slots as f64 * self.slot_len
    }

    pub fn dist_min(&self) -> &[f64] {
        &self.dist_min
    }

    pub fn dist_max(&self) -> &[f64] {
        &self.dist_max
    }

    /// `(min, max)` distance of slot `n` (1-based).
    pub fn slot(&self, n: usize) -> Result<(f64, f64)> {
        if n == 0 || n > self.n_slots {
            return Err(Error::IndexOutOfRange { what: "slot", index: n, len: self.n_slots });
        }
        Ok((self.dist_min[n - 1], self.dist_max[n - 1]))
    }

    /// Largest distance over all slots.
    pub fn max_distance(&self) -> f64 {
        self.dist_max.iter().copied().fold(0.0, f64::max)
    }

    /// Slot index (1-based) reached at time `t`: `ceil(t/T_slot) MOD N`,
    /// with a zero remainder mapped to `N`.
    pub fn slot_at(&self, t: f64) -> usize {
        let c = (t / self.slot_len).ceil() as i64;
        ((c - 1).rem_euclid(self.n_slots as i64) + 1) as usize
    }
}
