//! Shadowed-Rician fading statistics, the finite-state amplitude partition,
//! and second-order statistics (level-crossing rate, average fade duration).

mod crossing;
mod fading;
mod fsmc;

pub use crossing::{afd, afd_with_exponent, lcr, lcr_with_exponent, DopplerSpec, XiExponent};
pub use fading::SrFading;
pub use fsmc::{state_prob_matrix, state_probs, GainPartition, StateProbMatrix};
