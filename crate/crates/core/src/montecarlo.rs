//! Monte-Carlo oracle for the closed forms.
//!
//! Samples are produced in fixed-size blocks. Block `b` draws from a ChaCha8
//! generator keyed by the master seed with its stream set to `b`, so each
//! block is reproducible on its own. Blocks run in parallel and their
//! statistics are merged in block order, which keeps results bit-identical
//! regardless of thread count.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::channel::{GainPartition, SrFading};
use crate::error::{Error, Result};
use crate::schemes::{pat_shannon_gap, rat_rate_bounds, rat_wait_rate, LinkModel, Scheme};

/// Generator description recorded in every [`SimResult`].
pub const RNG_NAME: &str = "chacha8/stream-per-block-8192";

const BLOCK: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub n_samples: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(n_samples: u64, seed: u64) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::invalid("n_samples", "must be at least 1"));
        }
        Ok(Self { n_samples, seed })
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    /// Whether `x` lies within `k` standard errors of the mean.
    pub fn covers(&self, x: f64, k: f64) -> bool {
        (x - self.mean).abs() <= k * self.se
    }

    /// Whether `[lo, hi]`, widened by `k` standard errors, contains the mean.
    pub fn within(&self, lo: f64, hi: f64, k: f64) -> bool {
        self.mean >= lo - k * self.se && self.mean <= hi + k * self.se
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub mean_rate: Option<Estimate>,
    pub mean_power: Option<Estimate>,
    /// Ratio of the two means; delta-method standard error.
    pub ee: Option<Estimate>,
    pub empirical_dor: Option<Estimate>,
    pub n_samples: u64,
    pub rng: &'static str,
}

/// Draws power gains from the shadowed-Rician generative model: complex
/// Gaussian scatter with per-dimension variance `b0` plus a line-of-sight
/// phasor with Gamma(m, Ω/m) power and uniform phase.
#[derive(Debug, Clone)]
pub struct SrSampler {
    scatter_sd: f64,
    los: Option<Gamma<f64>>,
}

impl SrSampler {
    pub fn new(fading: &SrFading) -> Self {
        let los = (fading.omega() > 0.0)
            .then(|| Gamma::new(fading.m(), fading.omega() / fading.m()).expect("m >= 0.5, omega > 0"));
        Self { scatter_sd: fading.b0().sqrt(), los }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let (mut re, mut im) = (self.scatter_sd * x, self.scatter_sd * y);
        if let Some(los) = &self.los {
            let amp = los.sample(rng).sqrt();
            let phase = rng.random::<f64>() * TAU;
            re += amp * phase.cos();
            im += amp * phase.sin();
        }
        re * re + im * im
    }
}

/// One power-gain draw.
pub fn sample_sr_gain<R: Rng + ?Sized>(fading: &SrFading, rng: &mut R) -> f64 {
    SrSampler::new(fading).sample(rng)
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn blocks(n: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let count = n.div_ceil(BLOCK) as usize;
    (0..count).into_par_iter().map(move |b| {
        let b = b as u64;
        (b, BLOCK.min(n - b * BLOCK))
    })
}

/// `n` independent gain draws, in a seed-determined order.
pub fn sample_gains(fading: &SrFading, n: u64, seed: u64) -> Vec<f64> {
    let sampler = SrSampler::new(fading);
    let parts: Vec<Vec<f64>> = blocks(n)
        .map(|(b, len)| {
            let mut rng = block_rng(seed, b);
            (0..len).map(|_| sampler.sample(&mut rng)).collect()
        })
        .collect();
    parts.concat()
}

/// Number of draws falling in each state of `part`.
pub fn state_counts(fading: &SrFading, part: &GainPartition, n: u64, seed: u64) -> Vec<u64> {
    let sampler = SrSampler::new(fading);
    let parts: Vec<Vec<u64>> = blocks(n)
        .map(|(b, len)| {
            let mut rng = block_rng(seed, b);
            let mut counts = vec![0u64; part.k()];
            for _ in 0..len {
                counts[part.state_of(sampler.sample(&mut rng)) - 1] += 1;
            }
            counts
        })
        .collect();
    parts.into_iter().fold(vec![0; part.k()], |mut acc, c| {
        acc.iter_mut().zip(c).for_each(|(a, c)| *a += c);
        acc
    })
}

/// Kolmogorov–Smirnov distance between sorted samples and their CDF values.
pub fn ks_statistic(cdf_at_sorted: &[f64]) -> f64 {
    let n = cdf_at_sorted.len() as f64;
    cdf_at_sorted
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / n).max((i + 1) as f64 / n - f))
        .fold(0.0, f64::max)
}

/// Asymptotic one-sample KS critical value at level `alpha`.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

// Running first and second moments of a pair (x, y).
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mx: f64,
    my: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

impl Moments {
    fn push(&mut self, x: f64, y: f64) {
        self.n += 1.0;
        let dx = x - self.mx;
        let dy = y - self.my;
        self.mx += dx / self.n;
        self.my += dy / self.n;
        self.sxx += dx * (x - self.mx);
        self.syy += dy * (y - self.my);
        self.sxy += dx * (y - self.my);
    }

    fn merge(self, o: Moments) -> Moments {
        if o.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let dx = o.mx - self.mx;
        let dy = o.my - self.my;
        let w = self.n * o.n / n;
        Moments {
            n,
            mx: self.mx + dx * o.n / n,
            my: self.my + dy * o.n / n,
            sxx: self.sxx + o.sxx + dx * dx * w,
            syy: self.syy + o.syy + dy * dy * w,
            sxy: self.sxy + o.sxy + dx * dy * w,
        }
    }

    fn var_x(&self) -> f64 {
        if self.n > 1.0 { self.sxx / (self.n - 1.0) } else { 0.0 }
    }

    fn var_y(&self) -> f64 {
        if self.n > 1.0 { self.syy / (self.n - 1.0) } else { 0.0 }
    }

    fn cov(&self) -> f64 {
        if self.n > 1.0 { self.sxy / (self.n - 1.0) } else { 0.0 }
    }

    fn x(&self) -> Estimate {
        Estimate { mean: self.mx, se: (self.var_x() / self.n).sqrt() }
    }

    fn y(&self) -> Estimate {
        Estimate { mean: self.my, se: (self.var_y() / self.n).sqrt() }
    }

    // x̄/ȳ with a first-order (delta method) standard error
    fn ratio(&self) -> Option<Estimate> {
        if !(self.my > 0.0) {
            return None;
        }
        let r = self.mx / self.my;
        let var = (self.var_x() - 2.0 * r * self.cov() + r * r * self.var_y()) / (self.my * self.my);
        Some(Estimate { mean: r, se: (var.max(0.0) / self.n).sqrt() })
    }
}

fn run_blocks<F>(cfg: &SimConfig, per_block: F) -> Moments
where
    F: Fn(&mut ChaCha8Rng, u64) -> Moments + Sync,
{
    let parts: Vec<Moments> = blocks(cfg.n_samples).map(|(b, len)| per_block(&mut block_rng(cfg.seed, b), len)).collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

/// Mean delivered rate and transmit power over random arrival times and
/// gains. RAT uses the exact slant range at the arrival instant; PAT
/// inverts the channel against the slot's largest distance.
pub fn simulate_rate_power(model: &LinkModel, cfg: &SimConfig) -> Result<SimResult> {
    let setup = model.setup();
    let tl = model.timeline();
    let geo = setup.geometry;
    let budget = setup.budget;
    let g1 = model.first_threshold().powi(2);
    let sampler = SrSampler::new(&setup.fading);
    let span = tl.span();

    let stats = match setup.scheme {
        Scheme::Rat(rat) => {
            let gain_scale = rat.tx_power / budget.noise_power;
            run_blocks(cfg, |rng, len| {
                let mut acc = Moments::default();
                for _ in 0..len {
                    let t = rng.random::<f64>() * span;
                    let g = sampler.sample(rng);
                    if g >= g1 {
                        let d = geo.distance_at(t).expect("t lies inside the pass");
                        acc.push(budget.rate(gain_scale * g / budget.path_loss(d)), rat.tx_power);
                    } else {
                        acc.push(0.0, 0.0);
                    }
                }
                acc
            })
        }
        Scheme::Pat(pat) => {
            let need: Vec<f64> = tl
                .dist_max()
                .iter()
                .map(|&d| budget.noise_power * budget.path_loss(d) * pat_shannon_gap(&budget, &pat))
                .collect();
            run_blocks(cfg, |rng, len| {
                let mut acc = Moments::default();
                for _ in 0..len {
                    let t = rng.random::<f64>() * span;
                    let g = sampler.sample(rng);
                    if g >= g1 && g > 0.0 {
                        acc.push(pat.fixed_rate, need[tl.slot_at(t) - 1] / g);
                    } else {
                        acc.push(0.0, 0.0);
                    }
                }
                acc
            })
        }
    };
    Ok(SimResult {
        mean_rate: Some(stats.x()),
        mean_power: Some(stats.y()),
        ee: stats.ratio(),
        empirical_dor: None,
        n_samples: cfg.n_samples,
        rng: RNG_NAME,
    })
}

/// Fraction of packets whose delivery time exceeds the threshold. A packet
/// that arrives in a fade waits an exponential time with mean `lambda`, then
/// goes out at the state-2 rate of the slot reached after the wait; other
/// packets go out at their state's lower-edge rate.
pub fn simulate_dor(model: &LinkModel, lambda: f64, cfg: &SimConfig) -> Result<SimResult> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("lambda", format!("{lambda} must be positive")));
    }
    let setup = model.setup();
    let tl = model.timeline();
    let part = model.partition();
    let traffic = setup.traffic;
    let t_th = traffic.delay_threshold;
    let sampler = SrSampler::new(&setup.fading);
    let wait = Exp::new(1.0 / lambda).expect("positive rate");
    let span = tl.span();
    let n_slots = tl.n_slots();
    let k_states = part.k();

    // airtime[(n−1)·K + (k−1)] for states k ≥ 2 and the post-fade airtime per slot
    let (airtime, after_fade): (Vec<f64>, Vec<f64>) = match setup.scheme {
        Scheme::Rat(rat) => {
            let mut table = vec![f64::INFINITY; n_slots * k_states];
            let mut fade = Vec::with_capacity(n_slots);
            for n in 1..=n_slots {
                for k in 2..=k_states {
                    let (r_lo, _) = rat_rate_bounds(&setup.budget, &rat, part, tl, k, n)?;
                    table[(n - 1) * k_states + k - 1] = traffic.airtime(r_lo);
                }
                fade.push(traffic.airtime(rat_wait_rate(&setup.budget, &rat, part, tl, n)?));
            }
            (table, fade)
        }
        Scheme::Pat(pat) => {
            let a = traffic.airtime(pat.fixed_rate);
            (vec![a; n_slots * k_states], vec![a; n_slots])
        }
    };

    let stats = run_blocks(cfg, |rng, len| {
        let mut acc = Moments::default();
        for _ in 0..len {
            let t = rng.random::<f64>() * span;
            let g = sampler.sample(rng);
            let k = part.state_of(g);
            let dt = if k == 1 {
                let w = wait.sample(rng);
                w + after_fade[tl.slot_at(t + w) - 1]
            } else {
                airtime[(tl.slot_at(t) - 1) * k_states + k - 1]
            };
            acc.push(if dt > t_th { 1.0 } else { 0.0 }, 0.0);
        }
        acc
    });
    Ok(SimResult {
        mean_rate: None,
        mean_power: None,
        ee: None,
        empirical_dor: Some(stats.x()),
        n_samples: cfg.n_samples,
        rng: RNG_NAME,
    })
}

/// Rate, power, EE and DOR together, with the DOR run on its own stream
/// family (seed + 1).
pub fn simulate(model: &LinkModel, cfg: &SimConfig) -> Result<SimResult> {
    let lambda = model.lambda()?;
    let rp = simulate_rate_power(model, cfg)?;
    let dor = simulate_dor(model, lambda, &SimConfig { seed: cfg.seed.wrapping_add(1), ..*cfg })?;
    Ok(SimResult { empirical_dor: dor.empirical_dor, ..rp })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_merge_matches_sequential() {
        let xs: Vec<(f64, f64)> = (0..1000).map(|i| ((i as f64).sin(), (i as f64 * 0.37).cos() + 2.0)).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&(x, y)| whole.push(x, y));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..313].iter().for_each(|&(x, y)| a.push(x, y));
        xs[313..].iter().for_each(|&(x, y)| b.push(x, y));
        let merged = a.merge(b);
        for (u, v) in [(whole.mx, merged.mx), (whole.sxx, merged.sxx), (whole.syy, merged.syy), (whole.sxy, merged.sxy)] {
            assert!((u - v).abs() < 1e-10 * u.abs().max(1.0));
        }
    }

    #[test]
    fn ks_helpers() {
        // evenly spread sample: every step misses by half a step
        let n = 100;
        let cdf: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        assert!((ks_statistic(&cdf) - 0.005).abs() < 1e-15);
        assert!((ks_critical(10_000, 0.01) - 0.016_276).abs() < 1e-6);
    }

    #[test]
    fn rayleigh_limit_mean() {
        let f = SrFading::new(1.0, 0.4, 0.0).unwrap();
        let g = sample_gains(&f, 200_000, 7);
        let mean = g.iter().sum::<f64>() / g.len() as f64;
        // exponential with mean 0.8: sd of the mean 0.8/sqrt(n)
        assert!((mean - 0.8).abs() < 3.0 * 0.8 / (g.len() as f64).sqrt());
    }

    #[test]
    fn samples_are_seed_deterministic() {
        let f = SrFading::new(10.1, 0.126, 0.825).unwrap();
        assert_eq!(sample_gains(&f, 20_000, 3), sample_gains(&f, 20_000, 3));
        assert_ne!(sample_gains(&f, 100, 3), sample_gains(&f, 100, 4));
        // a prefix of a longer run equals the shorter run
        let long = sample_gains(&f, 20_000, 3);
        assert_eq!(&long[..10_000], sample_gains(&f, 10_000, 3).as_slice());
    }

    #[test]
    fn sim_config_rejects_zero() {
        assert!(SimConfig::new(0, 1).is_err());
    }
}
