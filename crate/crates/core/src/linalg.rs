//! Dense numeric kernels: SVD, symmetric eigendecomposition, k-means and
//! linear assignment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, mismatch, Error, Result};
use crate::Matrix;

#[derive(Debug, Clone)]
pub struct SvdResult {
    /// `m × r`, orthonormal columns.
    pub u: Matrix,
    /// Nonincreasing, nonnegative; length `r = min(m, n)`.
    pub s: Vec<f64>,
    /// `n × r`, orthonormal columns.
    pub v: Matrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for (j, &sj) in self.s.iter().enumerate() {
            us.column_mut(j).scale_mut(sj);
        }
        us * self.v.transpose()
    }
}

#[derive(Debug, Clone)]
pub struct EigResult {
    /// Sorted in descending order.
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector for `values[i]`.
    pub vectors: Matrix,
}

fn to_faer(a: &Matrix) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn check_finite(a: &Matrix, what: &'static str) -> Result<()> {
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(what));
    }
    Ok(())
}

/// Thin SVD with singular values sorted in nonincreasing order.
pub fn svd(a: &Matrix) -> Result<SvdResult> {
    check_finite(a, "svd input")?;
    let (m, n) = a.shape();
    let r = m.min(n);
    if r == 0 {
        return Ok(SvdResult { u: Matrix::zeros(m, 0), s: vec![], v: Matrix::zeros(n, 0) });
    }
    let dec = to_faer(a).thin_svd().map_err(|_| Error::NoConvergence("svd"))?;
    let (u, s, v) = (dec.U(), dec.S().column_vector(), dec.V());
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]).then(i.cmp(&j)));
    Ok(SvdResult {
        u: Matrix::from_fn(m, r, |i, c| u[(i, order[c])]),
        s: order.iter().map(|&i| s[i]).collect(),
        v: Matrix::from_fn(n, r, |i, c| v[(i, order[c])]),
    })
}

/// Maximum tolerated `|a_ij - a_ji|` for [`sym_eig`].
pub const SYMMETRY_TOL: f64 = 1e-8;

pub fn max_asymmetry(a: &Matrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in (j + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

/// Eigendecomposition of a symmetric matrix, eigenvalues descending.
pub fn sym_eig(a: &Matrix) -> Result<EigResult> {
    if !a.is_square() {
        return mismatch(format!("sym_eig needs a square matrix, got {}x{}", a.nrows(), a.ncols()));
    }
    check_finite(a, "sym_eig input")?;
    let asym = max_asymmetry(a);
    if asym > SYMMETRY_TOL {
        return invalid(format!("matrix is not symmetric (max |a_ij - a_ji| = {asym:e})"));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(EigResult { values: vec![], vectors: Matrix::zeros(0, 0) });
    }
    // Only the lower triangle is read; average it with the upper one first so
    // the result does not depend on which half carries rounding noise.
    let sym = (a + a.transpose()) * 0.5;
    let dec = to_faer(&sym).self_adjoint_eigen(faer::Side::Lower).map_err(|_| Error::NoConvergence("sym_eig"))?;
    let (lam, q) = (dec.S().column_vector(), dec.U());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| lam[j].total_cmp(&lam[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| lam[i]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| q[(r, order[c])]);
    Ok(EigResult { values, vectors })
}

/// Default number of k-means restarts.
pub const KMEANS_RESTARTS: usize = 20;
const KMEANS_MAX_ITER: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's k-means over the rows of `points` with k-means++ seeding.
///
/// Each restart draws from its own ChaCha stream derived from `seed`, so the
/// result does not depend on how restarts are scheduled across threads. The
/// lowest-inertia restart wins; ties go to the lower restart index.
pub fn kmeans(points: &Matrix, c: usize, restarts: usize, seed: u64) -> Result<KMeansResult> {
    let n = points.nrows();
    if n == 0 || points.ncols() == 0 {
        return invalid("kmeans needs a non-empty point set");
    }
    if c == 0 || c > n {
        return invalid(format!("kmeans needs 1 <= c <= n, got c = {c}, n = {n}"));
    }
    if restarts == 0 {
        return invalid("kmeans needs at least one restart");
    }
    check_finite(points, "kmeans input")?;
    let rows: Vec<Vec<f64>> = points.row_iter().map(|r| r.iter().copied().collect()).collect();
    let runs: Vec<KMeansResult> =
        (0..restarts).into_par_iter().map(|r| kmeans_single(&rows, c, seed, r as u64)).collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.inertia < runs[best].inertia {
            best = i;
        }
    }
    Ok(runs.into_iter().nth(best).expect("at least one restart"))
}

fn kmeans_plus_plus(rows: &[Vec<f64>], c: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    let mut centers = vec![rows[first].clone()];
    let mut dist: Vec<f64> = rows.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < c {
        let total: f64 = dist.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random_range(0.0..total);
            let mut pick = None;
            for (i, &d) in dist.iter().enumerate() {
                if d > 0.0 {
                    pick = Some(i);
                    if target < d {
                        break;
                    }
                    target -= d;
                }
            }
            pick.expect("positive total implies a positive weight")
        } else {
            // every remaining point coincides with a center
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen[pick] = true;
        centers.push(rows[pick].clone());
        let last = centers.last().expect("just pushed");
        for (d, p) in dist.iter_mut().zip(rows) {
            *d = d.min(sq_dist(p, last));
        }
    }
    centers
}

fn kmeans_single(rows: &[Vec<f64>], c: usize, seed: u64, stream: u64) -> KMeansResult {
    let n = rows.len();
    let d = rows[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut centers = kmeans_plus_plus(rows, c, &mut rng);
    let mut labels = vec![usize::MAX; n];
    for _ in 0..KMEANS_MAX_ITER {
        let mut changed = false;
        for (i, p) in rows.iter().enumerate() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (j, ctr) in centers.iter().enumerate() {
                let dj = sq_dist(p, ctr);
                if dj < best_d {
                    best_d = dj;
                    best = j;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        repair_empty_clusters(rows, &mut labels, &centers, c);
        let mut sums = vec![vec![0.0; d]; c];
        let mut counts = vec![0usize; c];
        for (p, &l) in rows.iter().zip(&labels) {
            counts[l] += 1;
            for (s, x) in sums[l].iter_mut().zip(p) {
                *s += x;
            }
        }
        for j in 0..c {
            if counts[j] > 0 {
                centers[j] = sums[j].iter().map(|s| s / counts[j] as f64).collect();
            }
        }
        if !changed {
            break;
        }
    }
    let inertia = rows.iter().zip(&labels).map(|(p, &l)| sq_dist(p, &centers[l])).sum();
    KMeansResult { labels, inertia }
}

/// Moves the point farthest from its centroid into each empty cluster. Points
/// that are alone in their cluster are never moved.
fn repair_empty_clusters(rows: &[Vec<f64>], labels: &mut [usize], centers: &[Vec<f64>], c: usize) {
    loop {
        let mut counts = vec![0usize; c];
        for &l in labels.iter() {
            counts[l] += 1;
        }
        let Some(empty) = counts.iter().position(|&k| k == 0) else { return };
        let mut far = None;
        let mut far_d = -1.0;
        for (i, p) in rows.iter().enumerate() {
            if counts[labels[i]] < 2 {
                continue;
            }
            let di = sq_dist(p, &centers[labels[i]]);
            if di > far_d {
                far_d = di;
                far = Some(i);
            }
        }
        match far {
            Some(i) => labels[i] = empty,
            None => return,
        }
    }
}

/// Solves the square linear assignment problem; `result[i]` is the column
/// assigned to row `i`, minimizing `Σ cost[(i, result[i])]`.
///
/// Shortest augmenting paths with row/column potentials, `O(c³)`.
pub fn min_cost_assignment(cost: &Matrix) -> Result<Vec<usize>> {
    if !cost.is_square() {
        return mismatch(format!(
            "assignment needs a square cost matrix, got {}x{}",
            cost.nrows(),
            cost.ncols()
        ));
    }
    check_finite(cost, "assignment cost")?;
    let n = cost.nrows();
    // 1-based arrays with a sentinel column 0
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[row_of_col[j] - 1] = j - 1;
    }
    Ok(assignment)
}
