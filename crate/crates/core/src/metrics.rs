//! External clustering metrics: ACC, NMI, ARI, pairwise precision / recall /
//! F1 and purity.
//!
//! Conventions for degenerate inputs:
//! - NMI is `I / sqrt(H_pred · H_truth)` (natural log). If both partitions
//!   are trivial (zero entropy) it is 1; if exactly one is, it is 0.
//! - ARI is 1 when its denominator vanishes, which only happens for two
//!   identical partitions (both a single cluster or both all singletons).
//! - Pairwise precision / recall with no candidate pairs are 0, and F1 is 0
//!   when precision + recall is 0.
//!
//! Labels are arbitrary ids: every metric is invariant under relabeling of
//! either argument.

use std::collections::HashMap;
use std::fmt;

use crate::error::{mismatch, Result};
use crate::linalg::min_cost_assignment;
use crate::Matrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub acc: f64,
    pub nmi: f64,
    pub ari: f64,
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    pub purity: f64,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "acc,nmi,ari,f1,precision,recall,purity";

    pub fn csv_row(&self) -> String {
        format!(
            "{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
            self.acc, self.nmi, self.ari, self.f1, self.precision, self.recall, self.purity
        )
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ACC       {:.4}", self.acc)?;
        writeln!(f, "NMI       {:.4}", self.nmi)?;
        writeln!(f, "ARI       {:.4}", self.ari)?;
        writeln!(f, "F1        {:.4}", self.f1)?;
        writeln!(f, "Precision {:.4}", self.precision)?;
        writeln!(f, "Recall    {:.4}", self.recall)?;
        write!(f, "Purity    {:.4}", self.purity)
    }
}

/// Contingency counts with rows indexed by predicted cluster and columns by
/// true class, both compacted to `0..k` in order of first appearance.
struct Contingency {
    table: Vec<Vec<usize>>,
    n: usize,
}

impl Contingency {
    fn new(pred: &[usize], truth: &[usize]) -> Result<Self> {
        if pred.len() != truth.len() {
            return mismatch(format!("label vectors differ in length: {} vs {}", pred.len(), truth.len()));
        }
        let rows = compact(pred);
        let cols = compact(truth);
        let r = rows.iter().max().map_or(0, |m| m + 1);
        let c = cols.iter().max().map_or(0, |m| m + 1);
        let mut table = vec![vec![0usize; c]; r];
        for (&i, &j) in rows.iter().zip(&cols) {
            table[i][j] += 1;
        }
        Ok(Self { table, n: pred.len() })
    }

    fn row_sums(&self) -> Vec<usize> {
        self.table.iter().map(|r| r.iter().sum()).collect()
    }

    fn col_sums(&self) -> Vec<usize> {
        let c = self.table.first().map_or(0, Vec::len);
        (0..c).map(|j| self.table.iter().map(|r| r[j]).sum()).collect()
    }
}

fn compact(labels: &[usize]) -> Vec<usize> {
    let mut ids = HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect()
}

fn pairs(k: usize) -> f64 {
    let k = k as f64;
    k * (k - 1.0) / 2.0
}

/// Fraction of samples matched under the best one-to-one mapping of
/// predicted clusters onto true classes.
pub fn accuracy(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let ct = Contingency::new(pred, truth)?;
    if ct.n == 0 {
        return Ok(1.0);
    }
    let r = ct.table.len();
    let c = ct.table[0].len();
    let k = r.max(c);
    let cost = Matrix::from_fn(k, k, |i, j| if i < r && j < c { -(ct.table[i][j] as f64) } else { 0.0 });
    let assignment = min_cost_assignment(&cost)?;
    let matched: usize =
        assignment.iter().enumerate().filter(|&(i, &j)| i < r && j < c).map(|(i, &j)| ct.table[i][j]).sum();
    Ok(matched as f64 / ct.n as f64)
}

fn entropy(counts: &[usize], n: usize) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.ln()
        })
        .sum()
}

pub fn nmi(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let ct = Contingency::new(pred, truth)?;
    if ct.n == 0 {
        return Ok(1.0);
    }
    let n = ct.n as f64;
    let a = ct.row_sums();
    let b = ct.col_sums();
    let ha = entropy(&a, ct.n);
    let hb = entropy(&b, ct.n);
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for (i, row) in ct.table.iter().enumerate() {
        for (j, &nij) in row.iter().enumerate() {
            if nij > 0 {
                let nij = nij as f64;
                mi += nij / n * (n * nij / (a[i] as f64 * b[j] as f64)).ln();
            }
        }
    }
    Ok((mi / (ha * hb).sqrt()).clamp(0.0, 1.0))
}

pub fn ari(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let ct = Contingency::new(pred, truth)?;
    let index: f64 = ct.table.iter().flatten().map(|&x| pairs(x)).sum();
    let sum_a: f64 = ct.row_sums().into_iter().map(pairs).sum();
    let sum_b: f64 = ct.col_sums().into_iter().map(pairs).sum();
    let total = pairs(ct.n);
    if total == 0.0 {
        return Ok(1.0);
    }
    // (index - expected) / (max - expected), multiplied through by `total` so
    // that integer-valued pair counts stay exact
    let num = index * total - sum_a * sum_b;
    let denom = 0.5 * (sum_a + sum_b) * total - sum_a * sum_b;
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok(num / denom)
}

/// Pair-counting `(precision, recall, f1)` over all unordered sample pairs.
pub fn pairwise_prf(pred: &[usize], truth: &[usize]) -> Result<(f64, f64, f64)> {
    let ct = Contingency::new(pred, truth)?;
    let tp: f64 = ct.table.iter().flatten().map(|&x| pairs(x)).sum();
    let pred_pairs: f64 = ct.row_sums().into_iter().map(pairs).sum();
    let truth_pairs: f64 = ct.col_sums().into_iter().map(pairs).sum();
    let precision = if pred_pairs > 0.0 { tp / pred_pairs } else { 0.0 };
    let recall = if truth_pairs > 0.0 { tp / truth_pairs } else { 0.0 };
    let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
    Ok((precision, recall, f1))
}

pub fn purity(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let ct = Contingency::new(pred, truth)?;
    if ct.n == 0 {
        return Ok(1.0);
    }
    let hits: usize = ct.table.iter().map(|r| r.iter().copied().max().unwrap_or(0)).sum();
    Ok(hits as f64 / ct.n as f64)
}

pub fn full_report(pred: &[usize], truth: &[usize]) -> Result<MetricsReport> {
    let (precision, recall, f1) = pairwise_prf(pred, truth)?;
    Ok(MetricsReport {
        acc: accuracy(pred, truth)?,
        nmi: nmi(pred, truth)?,
        ari: ari(pred, truth)?,
        f1,
        precision,
        recall,
        purity: purity(pred, truth)?,
    })
}
