//! Link-performance analysis for LEO satellite-to-ground links.
//!
//! The crate combines a shadowed-Rician finite-state channel with a
//! slot-discretized pass geometry and evaluates throughput, energy efficiency
//! and delay outage rate for rate-adaptive and power-adaptive transmission.
//! A Monte-Carlo simulator re-derives every closed form independently.

// `!(x > 0.0)` also rejects NaN; oracle constants keep every printed digit
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod channel;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod quad;
pub mod scenario;
pub mod schemes;
pub mod special;
pub mod units;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/fading.md")]
    struct Fading;
    #[doc = include_str!("../../../book/src/fsmc.md")]
    struct Fsmc;
    #[doc = include_str!("../../../book/src/geometry.md")]
    struct Geometry;
    #[doc = include_str!("../../../book/src/crossings.md")]
    struct Crossings;
    #[doc = include_str!("../../../book/src/rat.md")]
    struct Rat;
    #[doc = include_str!("../../../book/src/pat.md")]
    struct Pat;
    #[doc = include_str!("../../../book/src/delay-outage.md")]
    struct DelayOutage;
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    struct MonteCarlo;
    #[doc = include_str!("../../../book/src/scenarios.md")]
    struct Scenarios;
}
