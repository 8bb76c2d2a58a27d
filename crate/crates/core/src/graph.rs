//! Per-view affinity construction and cleanup.

use crate::error::{invalid, mismatch, Error, Result};
use crate::Matrix;

/// One view of a dataset: a `d × n` feature matrix (one column per sample).
#[derive(Debug, Clone)]
pub struct FeatureView {
    pub x: Matrix,
    pub id: usize,
}

impl FeatureView {
    pub fn new(x: Matrix, id: usize) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("feature matrix"));
        }
        Ok(Self { x, id })
    }

    pub fn samples(&self) -> usize {
        self.x.ncols()
    }
}

/// Kernel bandwidth for [`gaussian_affinity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sigma {
    Fixed(f64),
    /// Median of the pairwise sample distances (of the positive ones if the
    /// plain median is zero; `1` if every distance is zero).
    Auto,
}

fn pairwise_sq_dists(x: &Matrix) -> Matrix {
    let n = x.ncols();
    let mut d = Matrix::zeros(n, n);
    for j in 0..n {
        for i in (j + 1)..n {
            let v = (x.column(i) - x.column(j)).norm_squared();
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    d
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// `W_ij = exp(−‖x_i − x_j‖² / (2σ²))` with a zero diagonal.
pub fn gaussian_affinity(view: &FeatureView, sigma: Sigma) -> Result<Matrix> {
    let n = view.samples();
    if n < 2 {
        return invalid(format!("need at least 2 samples, got {n}"));
    }
    let d2 = pairwise_sq_dists(&view.x);
    let sigma = match sigma {
        Sigma::Fixed(s) if s > 0.0 && s.is_finite() => s,
        Sigma::Fixed(s) => return invalid(format!("sigma must be positive, got {s}")),
        Sigma::Auto => {
            let dists: Vec<f64> =
                (0..n).flat_map(|j| ((j + 1)..n).map(move |i| (i, j))).map(|(i, j)| d2[(i, j)].sqrt()).collect();
            let m = median(dists.clone());
            if m > 0.0 {
                m
            } else {
                let positive: Vec<f64> = dists.into_iter().filter(|&d| d > 0.0).collect();
                if positive.is_empty() {
                    1.0
                } else {
                    median(positive)
                }
            }
        }
    };
    let denom = 2.0 * sigma * sigma;
    Ok(Matrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { (-d2[(i, j)] / denom).exp() }))
}

/// `round(log2(n)) + 1`.
pub fn default_knn(n: usize) -> usize {
    (n.max(1) as f64).log2().round() as usize + 1
}

/// Indices of the `k` largest off-diagonal entries of row `i`; ties go to the
/// lower column index.
pub fn nearest_neighbors(w: &Matrix, i: usize, k: usize) -> Vec<usize> {
    let mut cols: Vec<usize> = (0..w.ncols()).filter(|&j| j != i).collect();
    cols.sort_by(|&a, &b| w[(i, b)].total_cmp(&w[(i, a)]).then(a.cmp(&b)));
    cols.truncate(k);
    cols
}

/// Keeps `(i, j)` when `j` is among the `k` strongest neighbors of `i` or `i`
/// among those of `j`, zeroes everything else (diagonal included), then
/// symmetrizes with `max(W, Wᵀ)`.
pub fn knn_sparsify(w: &Matrix, k: usize) -> Result<Matrix> {
    if !w.is_square() {
        return mismatch(format!("affinity must be square, got {}x{}", w.nrows(), w.ncols()));
    }
    let n = w.nrows();
    if k == 0 || k >= n {
        return invalid(format!("k must satisfy 1 <= k < n = {n}, got {k}"));
    }
    let mut keep = vec![false; n * n];
    for i in 0..n {
        for j in nearest_neighbors(w, i, k) {
            keep[i * n + j] = true;
            keep[j * n + i] = true;
        }
    }
    Ok(Matrix::from_fn(n, n, |i, j| if keep[i * n + j] { w[(i, j)].max(w[(j, i)]) } else { 0.0 }))
}

/// `½(W + Wᵀ)` with negatives clamped to zero and a zero diagonal.
pub fn sanitize_affinity(w: &Matrix) -> Result<Matrix> {
    if !w.is_square() {
        return mismatch(format!("affinity must be square, got {}x{}", w.nrows(), w.ncols()));
    }
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("affinity matrix"));
    }
    let n = w.nrows();
    Ok(Matrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { (0.5 * (w[(i, j)] + w[(j, i)])).max(0.0) }))
}
