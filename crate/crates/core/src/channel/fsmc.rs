use crate::channel::SrFading;
use crate::error::{Error, Result};

/// Amplitude thresholds `μ_0 = 0 ≤ μ_1 ≤ … ≤ μ_{K−1}` splitting the fading
/// envelope into `K` states; `μ_K = ∞` is implicit. State `k` holds gains in
/// `[μ_{k−1}², μ_k²)`.
///
/// Thresholds may coincide (a zero first threshold is legal and leaves state 1
/// empty), they only need to be non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct GainPartition {
    thresholds: Vec<f64>,
    top_gain_mean: Option<f64>,
}

impl GainPartition {
    /// Partition from explicit amplitudes `[μ_0, …, μ_{K−1}]`.
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.len() < 2 {
            return Err(Error::invalid("partition.thresholds", "need at least two states"));
        }
        if thresholds[0] != 0.0 {
            return Err(Error::invalid("partition.thresholds", "mu_0 must be 0"));
        }
        if thresholds.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("partition.thresholds", "thresholds must be finite"));
        }
        if thresholds.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("partition.thresholds", "thresholds must be non-decreasing"));
        }
        Ok(Self { thresholds, top_gain_mean: None })
    }

    /// `K` states: the first at amplitude `first`, the others at
    /// equal-probability quantiles of the gain mass above `first²`.
    pub fn equal_probability(fading: &SrFading, first: f64, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid("partition.k", format!("{k} < 2")));
        }
        if !(first >= 0.0 && first.is_finite()) {
            return Err(Error::invalid("partition.first", format!("{first} is not a valid amplitude")));
        }
        let base = fading.cdf(first * first);
        let share = (1.0 - base) / (k - 1) as f64;
        let mut thresholds = vec![0.0, first];
        for j in 1..k - 1 {
            let prev = *thresholds.last().unwrap();
            let target = base + j as f64 * share;
            let mu = if target < 1.0 { fading.quantile(target).sqrt().max(prev) } else { prev };
            thresholds.push(mu);
        }
        Ok(Self::new(thresholds)?.with_top_mean(fading))
    }

    /// Explicit list `[μ_1, …, μ_{K−1}]`; `μ_0 = 0` is prepended.
    pub fn explicit(fading: &SrFading, upper: &[f64]) -> Result<Self> {
        let mut thresholds = Vec::with_capacity(upper.len() + 1);
        thresholds.push(0.0);
        thresholds.extend_from_slice(upper);
        Ok(Self::new(thresholds)?.with_top_mean(fading))
    }

    /// Attaches `E[G | G ≥ μ_{K−1}²]`, which stands in for the unbounded
    /// upper edge of the top state.
    pub fn with_top_mean(mut self, fading: &SrFading) -> Self {
        let edge = self.thresholds[self.k() - 1];
        self.top_gain_mean = Some(fading.conditional_mean_above(edge * edge));
        self
    }

    pub fn k(&self) -> usize {
        self.thresholds.len()
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// `μ_1`.
    pub fn first(&self) -> f64 {
        self.thresholds[1]
    }

    /// Amplitude `μ_j` for `j = 0..=K`; `μ_K` is infinite.
    pub fn mu(&self, j: usize) -> f64 {
        self.thresholds.get(j).copied().unwrap_or(f64::INFINITY)
    }

    pub fn top_gain_mean(&self) -> Option<f64> {
        self.top_gain_mean
    }

    /// State `1..=K` containing power gain `g`.
    pub fn state_of(&self, g: f64) -> usize {
        // number of thresholds with μ² ≤ g, μ_0 included
        self.thresholds.partition_point(|&mu| mu * mu <= g).max(1)
    }
}

/// `π_k = F(μ_k²) − F(μ_{k−1}²)`, with `π_K = 1 − F(μ_{K−1}²)`.
pub fn state_probs(fading: &SrFading, part: &GainPartition) -> Vec<f64> {
    let cdf: Vec<f64> = part.thresholds().iter().map(|mu| fading.cdf(mu * mu)).collect();
    let mut probs: Vec<f64> = cdf.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
    probs.push(1.0 - cdf[cdf.len() - 1]);
    probs
}

/// `π_{k,n}`, stored column by column (one column per slot).
#[derive(Debug, Clone, PartialEq)]
pub struct StateProbMatrix {
    k: usize,
    n: usize,
    data: Vec<f64>,
}

impl StateProbMatrix {
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let k = columns.first().map_or(0, Vec::len);
        if columns.is_empty() || k == 0 {
            return Err(Error::invalid("probs", "empty matrix"));
        }
        let mut data = Vec::with_capacity(k * columns.len());
        for col in columns {
            if col.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: col.len() });
            }
            if col.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::invalid("probs", "entries must lie in [0, 1]"));
            }
            let sum: f64 = col.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::invalid("probs", format!("column sums to {sum}")));
            }
            data.extend_from_slice(col);
        }
        Ok(Self { k, n: columns.len(), data })
    }

    pub fn k_states(&self) -> usize {
        self.k
    }

    pub fn n_slots(&self) -> usize {
        self.n
    }

    /// `π_{k,n}` with 1-based indices.
    pub fn get(&self, k: usize, n: usize) -> f64 {
        assert!((1..=self.k).contains(&k) && (1..=self.n).contains(&n), "({k}, {n}) out of range");
        self.data[(n - 1) * self.k + (k - 1)]
    }

    pub fn column(&self, n: usize) -> &[f64] {
        &self.data[(n - 1) * self.k..n * self.k]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.k)
    }
}

/// Per-slot state probabilities. Fading is constant over the pass, so every
/// column equals [`state_probs`].
pub fn state_prob_matrix(fading: &SrFading, part: &GainPartition, n_slots: usize) -> Result<StateProbMatrix> {
    if n_slots == 0 {
        return Err(Error::invalid("n_slots", "must be at least 1"));
    }
    let col = state_probs(fading, part);
    let k = col.len();
    Ok(StateProbMatrix { k, n: n_slots, data: col.iter().copied().cycle().take(k * n_slots).collect() })
}
