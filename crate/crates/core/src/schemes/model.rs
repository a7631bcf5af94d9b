use super::direct::{pat_dor_direct, rat_dor_direct};
use super::{pat_first_threshold, pat_report, rat_first_threshold, rat_report, LinkBudget, Scheme, SchemeReport, TrafficSpec};
use crate::channel::{
    afd_with_exponent, state_prob_matrix, DopplerSpec, GainPartition, SrFading, StateProbMatrix, XiExponent,
};
use crate::error::{Error, Result};
use crate::geometry::{DistanceEnvelope, PassGeometry, PassTimeline};
use crate::special::SeriesControl;

/// Which distance sets the first threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DmaxPolicy {
    /// Coverage-edge slant range `sqrt(H² + R²)`.
    #[default]
    Coverage,
    /// Largest slant range this terminal actually sees during the pass.
    Pass,
}

/// How thresholds above the first one are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionSpec {
    /// `states` regions; those above the first share the remaining
    /// probability equally.
    EqualProbability { states: usize },
    /// Amplitudes `μ_2, …, μ_{K−1}`; the first threshold always comes from
    /// the scheme.
    Explicit { upper: Vec<f64> },
}

impl Default for PartitionSpec {
    fn default() -> Self {
        PartitionSpec::EqualProbability { states: 8 }
    }
}

/// Everything needed to evaluate one link.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSetup {
    pub geometry: PassGeometry,
    pub slot_len: f64,
    pub d_max_policy: DmaxPolicy,
    pub fading: SrFading,
    pub doppler: DopplerSpec,
    pub xi_exponent: XiExponent,
    pub budget: LinkBudget,
    pub scheme: Scheme,
    pub traffic: TrafficSpec,
    pub partition: PartitionSpec,
}

/// A [`LinkSetup`] with its derived pieces: pass timeline, partition and
/// state probabilities.
#[derive(Debug, Clone)]
pub struct LinkModel {
    setup: LinkSetup,
    timeline: PassTimeline,
    partition: GainPartition,
    probs: StateProbMatrix,
    d_max: f64,
}

impl LinkModel {
    pub fn new(setup: LinkSetup) -> Result<Self> {
        let geometry = setup.geometry.validated()?;
        if geometry.path_loss_exp != setup.budget.path_loss_exp {
            return Err(Error::invalid("path_loss_exp", "geometry and link budget disagree"));
        }
        if !(setup.slot_len > 0.0) {
            return Err(Error::invalid("slot_len", format!("{} must be positive", setup.slot_len)));
        }
        let timeline = geometry.build_timeline(setup.slot_len)?;
        let d_max = match setup.d_max_policy {
            DmaxPolicy::Coverage => geometry.distance_range(DistanceEnvelope::AllTerminals).1,
            DmaxPolicy::Pass => timeline.max_distance(),
        };
        if timeline.max_distance() > d_max * (1.0 + 1e-12) {
            return Err(Error::invalid(
                "half_track",
                "the pass reaches beyond the coverage edge; shrink half_track or terminal_offset",
            ));
        }
        let first = match setup.scheme {
            Scheme::Rat(rat) => rat_first_threshold(&setup.budget, &rat, d_max),
            Scheme::Pat(pat) => pat_first_threshold(&setup.budget, &pat, d_max),
        };
        let partition = match &setup.partition {
            PartitionSpec::EqualProbability { states } => GainPartition::equal_probability(&setup.fading, first, *states)?,
            PartitionSpec::Explicit { upper } => {
                if upper.first().is_some_and(|&mu| mu < first) {
                    return Err(Error::invalid(
                        "partition.thresholds",
                        format!("{} lies below the first threshold {first}", upper[0]),
                    ));
                }
                let mut all = vec![first];
                all.extend_from_slice(upper);
                GainPartition::explicit(&setup.fading, &all)?
            }
        };
        let probs = state_prob_matrix(&setup.fading, &partition, timeline.n_slots())?;
        Ok(Self { setup: LinkSetup { geometry, ..setup }, timeline, partition, probs, d_max })
    }

    pub fn setup(&self) -> &LinkSetup {
        &self.setup
    }

    pub fn timeline(&self) -> &PassTimeline {
        &self.timeline
    }

    pub fn partition(&self) -> &GainPartition {
        &self.partition
    }

    pub fn probs(&self) -> &StateProbMatrix {
        &self.probs
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn first_threshold(&self) -> f64 {
        self.partition.first()
    }

    /// Mean fade duration below the first threshold.
    pub fn lambda(&self) -> Result<f64> {
        let s = &self.setup;
        afd_with_exponent(&s.fading, &s.doppler, self.first_threshold(), s.xi_exponent, &SeriesControl::default())
    }

    pub fn analyze(&self) -> Result<SchemeReport> {
        let s = &self.setup;
        let lambda = self.lambda()?;
        match s.scheme {
            Scheme::Rat(rat) => {
                rat_report(&s.budget, &rat, &self.partition, &self.timeline, &self.probs, &s.traffic, lambda)
            }
            Scheme::Pat(pat) => {
                pat_report(&s.budget, &pat, &self.partition, &self.timeline, &self.probs, &s.traffic, lambda)
            }
        }
    }

    /// DOR through the direct time-average route.
    pub fn dor_direct(&self) -> Result<f64> {
        let s = &self.setup;
        let lambda = self.lambda()?;
        match s.scheme {
            Scheme::Rat(rat) => {
                rat_dor_direct(&s.budget, &rat, &self.partition, &self.timeline, &self.probs, &s.traffic, lambda)
            }
            Scheme::Pat(pat) => pat_dor_direct(&pat, &self.timeline, &self.probs, &s.traffic, lambda),
        }
    }
}
