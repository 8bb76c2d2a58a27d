//! Ng–Jordan–Weiss spectral clustering.

use std::ops::Deref;

use crate::error::{invalid, Error, Result};
use crate::linalg::{kmeans, max_asymmetry, sym_eig};
use crate::Matrix;

/// Degree assigned to isolated vertices.
pub const DEGREE_FLOOR: f64 = 1e-12;
/// Maximum tolerated asymmetry of an input affinity.
pub const AFFINITY_SYMMETRY_TOL: f64 = 1e-8;

/// A hard partition of `n` samples into `clusters` groups labelled `0..clusters`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    labels: Vec<usize>,
    clusters: usize,
}

impl ClusterLabels {
    pub fn new(labels: Vec<usize>, clusters: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= clusters) {
            return invalid(format!("label {bad} out of range for {clusters} clusters"));
        }
        if labels.len() < clusters {
            return invalid(format!("{} samples cannot form {clusters} clusters", labels.len()));
        }
        Ok(Self { labels, clusters })
    }

    /// Cluster count taken as `max(label) + 1`.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let clusters = labels.iter().max().map_or(0, |m| m + 1);
        Self { labels, clusters }
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.labels
    }
}

impl Deref for ClusterLabels {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.labels
    }
}

fn check_affinity(s: &Matrix, c: usize) -> Result<()> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!("affinity must be square, got {}x{}", s.nrows(), s.ncols())));
    }
    let n = s.nrows();
    if c == 0 || c > n {
        return invalid(format!("cluster count must satisfy 1 <= c <= n = {n}, got {c}"));
    }
    if s.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("affinity matrix"));
    }
    if s.iter().any(|&x| x < 0.0) {
        return invalid("affinity has negative entries");
    }
    let asym = max_asymmetry(s);
    if asym > AFFINITY_SYMMETRY_TOL {
        return invalid(format!("affinity is not symmetric (max |s_ij - s_ji| = {asym:e})"));
    }
    Ok(())
}

/// Rows of the top-`c` eigenvectors of `D^{-1/2} S D^{-1/2}`, each scaled to
/// unit length.
pub fn spectral_embed(s: &Matrix, c: usize) -> Result<Matrix> {
    check_affinity(s, c)?;
    let n = s.nrows();
    let inv_sqrt: Vec<f64> = s
        .row_iter()
        .map(|r| {
            let d = r.sum();
            1.0 / if d > 0.0 { d } else { DEGREE_FLOOR }.sqrt()
        })
        .collect();
    let m = Matrix::from_fn(n, n, |i, j| inv_sqrt[i] * s[(i, j)] * inv_sqrt[j]);
    let m = (&m + m.transpose()) * 0.5;
    let eig = sym_eig(&m)?;
    let mut emb = eig.vectors.columns(0, c).into_owned();
    for mut row in emb.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 {
            row /= norm;
        } else {
            row.fill(0.0);
            row[0] = 1.0;
        }
    }
    Ok(emb)
}

/// k-means on the spectral embedding.
pub fn spectral_cluster(s: &Matrix, c: usize, restarts: usize, seed: u64) -> Result<ClusterLabels> {
    let emb = spectral_embed(s, c)?;
    let result = kmeans(&emb, c, restarts, seed)?;
    ClusterLabels::new(result.labels, c)
}
