//! Closed-form proximal operators of the nuclear norm, the symmetric nuclear
//! norm and the column-wise ℓ2,1 norm.

use crate::error::{invalid, mismatch, Result};
use crate::linalg::{svd, sym_eig};
use crate::Matrix;

fn check_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() || tau < 0.0 {
        return invalid(format!("threshold must be a finite nonnegative number, got {tau}"));
    }
    Ok(())
}

/// Singular value thresholding: `U · max(Σ − τ, 0) · Vᵀ`, the minimizer of
/// `τ‖X‖* + ½‖X − A‖²_F`.
pub fn svt(a: &Matrix, tau: f64) -> Result<Matrix> {
    check_tau(tau)?;
    let dec = svd(a)?;
    // singular values are sorted, so the survivors form a prefix
    let r = dec.s.iter().take_while(|&&x| x > tau).count();
    let mut us = dec.u.columns(0, r).into_owned();
    for (j, mut col) in us.column_iter_mut().enumerate() {
        col *= dec.s[j] - tau;
    }
    Ok(us * dec.v.columns(0, r).transpose())
}

/// SVT of the symmetric part `½(A + Aᵀ)`: the minimizer of
/// `τ‖X‖* + ½‖X − A‖²_F` over symmetric `X`.
///
/// For a symmetric matrix the singular values are `|λ_i|` with the
/// eigenvectors as singular vectors, so this runs on the eigendecomposition
/// and shrinks each eigenvalue's magnitude toward zero.
pub fn svt_symmetric(a: &Matrix, tau: f64) -> Result<Matrix> {
    if !a.is_square() {
        return mismatch(format!("svt_symmetric needs a square matrix, got {}x{}", a.nrows(), a.ncols()));
    }
    check_tau(tau)?;
    let sym = (a + a.transpose()) * 0.5;
    let dec = sym_eig(&sym)?;
    let keep: Vec<usize> = (0..dec.values.len()).filter(|&j| dec.values[j].abs() > tau).collect();
    let q = dec.vectors.select_columns(&keep);
    let mut qs = q.clone();
    for (mut col, &j) in qs.column_iter_mut().zip(&keep) {
        let lam = dec.values[j];
        col *= (lam.abs() - tau) * lam.signum();
    }
    let out = qs * q.transpose();
    Ok((&out + out.transpose()) * 0.5)
}

/// Column-wise group soft thresholding, the minimizer of
/// `τ‖X‖_{2,1} + ½‖X − A‖²_F`. Columns whose norm is at most `τ` become zero.
pub fn shrink_columns(a: &Matrix, tau: f64) -> Result<Matrix> {
    check_tau(tau)?;
    let mut out = a.clone();
    for mut col in out.column_iter_mut() {
        let norm = col.norm();
        if norm > tau {
            col.scale_mut((norm - tau) / norm);
        } else {
            col.fill(0.0);
        }
    }
    Ok(out)
}

pub fn nuclear_norm(a: &Matrix) -> Result<f64> {
    Ok(svd(a)?.s.iter().sum())
}

pub fn l21_norm(a: &Matrix) -> f64 {
    a.column_iter().map(|c| c.norm()).sum()
}
