//! Synthetic corrupted multi-view similarity tensors with known clusters.
//!
//! Every view starts from the ideal block-diagonal affinity (`intra` inside a
//! cluster, `leak` across clusters), adds symmetric Gaussian noise, clamps to
//! `[0, 1]` and zeroes the diagonal. In each corrupted view a fraction of the
//! samples then has its whole row and column replaced by uniform noise.
//!
//! View `k` draws its Gaussian noise and its corruption from two separate
//! ChaCha streams (`2k` and `2k + 1`) of the same seed, so changing the
//! corruption settings never changes the noise of any view.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::spectral::ClusterLabels;
use crate::tensor3::Tensor3;
use crate::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    /// Samples per cluster.
    pub sizes: Vec<usize>,
    pub views: usize,
    /// Mean affinity inside a cluster, in `(0, 1]`.
    pub intra: f64,
    /// Affinity between clusters, in `[0, 1)`.
    pub leak: f64,
    /// Standard deviation of the additive Gaussian noise.
    pub noise: f64,
    /// Fraction of samples corrupted per corrupted view, in `[0, 1)`.
    pub corruption: f64,
    /// Corrupted entries are drawn uniformly from `[0, corruption_max)`,
    /// `corruption_max` in `(0, 1]`.
    pub corruption_max: f64,
    /// Views that receive corruption; `None` means all of them.
    pub corrupted_views: Option<Vec<usize>>,
    pub seed: u64,
}

impl SynthSpec {
    /// Default intra-cluster affinity.
    pub const DEFAULT_INTRA: f64 = 0.8;

    /// `c` clusters of near-equal size (the first `n mod c` get one extra),
    /// no noise, no leak, no corruption.
    pub fn balanced(c: usize, n: usize, views: usize) -> Self {
        let sizes = (0..c).map(|i| n / c.max(1) + usize::from(i < n % c.max(1))).collect();
        Self {
            sizes,
            views,
            intra: Self::DEFAULT_INTRA,
            leak: 0.0,
            noise: 0.0,
            corruption: 0.0,
            corruption_max: 1.0,
            corrupted_views: None,
            seed: 0,
        }
    }

    pub fn samples(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return invalid("every cluster needs at least one sample");
        }
        if self.views == 0 {
            return invalid("need at least one view");
        }
        if !(self.intra > 0.0 && self.intra <= 1.0) {
            return invalid(format!("intra must lie in (0, 1], got {}", self.intra));
        }
        if !(self.leak >= 0.0 && self.leak < 1.0) {
            return invalid(format!("leak must lie in [0, 1), got {}", self.leak));
        }
        if !self.noise.is_finite() || self.noise < 0.0 {
            return invalid(format!("noise must be >= 0, got {}", self.noise));
        }
        if !(self.corruption >= 0.0 && self.corruption < 1.0) {
            return invalid(format!("corruption must lie in [0, 1), got {}", self.corruption));
        }
        if !(self.corruption_max > 0.0 && self.corruption_max <= 1.0) {
            return invalid(format!("corruption_max must lie in (0, 1], got {}", self.corruption_max));
        }
        if let Some(vs) = &self.corrupted_views {
            if let Some(&bad) = vs.iter().find(|&&k| k >= self.views) {
                return invalid(format!("corrupted view {bad} out of range for {} views", self.views));
            }
        }
        Ok(())
    }

    fn is_corrupted(&self, view: usize) -> bool {
        self.corruption > 0.0 && self.corrupted_views.as_ref().is_none_or(|vs| vs.contains(&view))
    }
}

/// Generates the `n × n × v` tensor and the ground-truth labels. Samples are
/// ordered cluster by cluster.
pub fn make_multiview(spec: &SynthSpec) -> Result<(Tensor3, ClusterLabels)> {
    spec.validate()?;
    let truth: Vec<usize> =
        spec.sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat_n(c, s)).collect();
    let n = truth.len();
    let mut slices = Vec::with_capacity(spec.views);
    for k in 0..spec.views {
        let mut noise_rng = ChaCha8Rng::seed_from_u64(spec.seed);
        noise_rng.set_stream(2 * k as u64);
        let mut w = Matrix::zeros(n, n);
        for j in 0..n {
            for i in (j + 1)..n {
                let base = if truth[i] == truth[j] { spec.intra } else { spec.leak };
                let eps: f64 = noise_rng.sample(StandardNormal);
                let x = (base + spec.noise * eps).clamp(0.0, 1.0);
                w[(i, j)] = x;
                w[(j, i)] = x;
            }
        }
        if spec.is_corrupted(k) {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(2 * k as u64 + 1);
            let count = (spec.corruption * n as f64).round() as usize;
            let mut picked = sample(&mut rng, n, count).into_vec();
            picked.sort_unstable();
            for s in picked {
                for j in 0..n {
                    if j != s {
                        let x: f64 = rng.random_range(0.0..spec.corruption_max);
                        w[(s, j)] = x;
                        w[(j, s)] = x;
                    }
                }
            }
        }
        slices.push(w);
    }
    let clusters = spec.sizes.len();
    Ok((Tensor3::stack_frontal(&slices)?, ClusterLabels::new(truth, clusters)?))
}
