//! Numerical proximal-operator oracle: projected subgradient descent on
//! `F(X) = ½‖X − A‖²_F + τ·g(X)`, independent of the library decompositions.

#![allow(dead_code)]

use mvsc_core::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularizer {
    Nuclear,
    SymmetricNuclear,
    ColumnL21,
}

/// One-sided Jacobi SVD. Returns `(U, σ, V)` with `A = U diag(σ) Vᵀ`; columns
/// of `U` belonging to zero singular values are left at zero.
pub fn jacobi_svd(a: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let (m, n) = a.shape();
    let mut u = a.clone();
    let mut v = Matrix::identity(n, n);
    for _ in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = u.column(p).norm_squared();
                let beta = u.column(q).norm_squared();
                let gamma = u.column(p).dot(&u.column(q));
                if gamma == 0.0 {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt());
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let (x, y) = (u[(r, p)], u[(r, q)]);
                    u[(r, p)] = c * x - s * y;
                    u[(r, q)] = s * x + c * y;
                }
                for r in 0..n {
                    let (x, y) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = c * x - s * y;
                    v[(r, q)] = s * x + c * y;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let sigma: Vec<f64> = (0..n).map(|j| u.column(j).norm()).collect();
    for (j, &s) in sigma.iter().enumerate() {
        if s > 0.0 {
            u.column_mut(j).unscale_mut(s);
        }
    }
    (u, sigma, v)
}

pub fn nuclear_norm(x: &Matrix) -> f64 {
    jacobi_svd(x).1.iter().sum()
}

pub fn l21_norm(x: &Matrix) -> f64 {
    x.column_iter().map(|c| c.norm()).sum()
}

fn symmetrize(x: &Matrix) -> Matrix {
    (x + x.transpose()) * 0.5
}

pub fn objective(reg: Regularizer, a: &Matrix, tau: f64, x: &Matrix) -> f64 {
    let g = match reg {
        Regularizer::Nuclear | Regularizer::SymmetricNuclear => nuclear_norm(x),
        Regularizer::ColumnL21 => l21_norm(x),
    };
    0.5 * (x - a).norm_squared() + tau * g
}

fn subgradient(reg: Regularizer, x: &Matrix) -> Matrix {
    match reg {
        Regularizer::Nuclear | Regularizer::SymmetricNuclear => {
            let (u, s, v) = jacobi_svd(x);
            let scale = s.iter().cloned().fold(0.0, f64::max);
            let mut g = Matrix::zeros(x.nrows(), x.ncols());
            for (j, &sj) in s.iter().enumerate() {
                if sj > 1e-14 * scale.max(1.0) {
                    g += u.column(j) * v.column(j).transpose();
                }
            }
            g
        }
        Regularizer::ColumnL21 => {
            let mut g = x.clone();
            for mut c in g.column_iter_mut() {
                let norm = c.norm();
                if norm > 0.0 {
                    c.unscale_mut(norm);
                }
            }
            g
        }
    }
}

/// Best iterate of projected subgradient descent from the zero matrix with
/// step `1/t`, stopping once the step falls below `1/iterations`. The
/// symmetric variant projects every iterate onto the symmetric matrices.
pub fn prox_oracle(reg: Regularizer, a: &Matrix, tau: f64, iterations: usize) -> Matrix {
    let project = |x: Matrix| if reg == Regularizer::SymmetricNuclear { symmetrize(&x) } else { x };
    let mut x = Matrix::zeros(a.nrows(), a.ncols());
    let mut best = x.clone();
    let mut best_f = objective(reg, a, tau, &x);
    for t in 1..=iterations {
        let g = &x - a + subgradient(reg, &x) * tau;
        x = project(&x - g / t as f64);
        let f = objective(reg, a, tau, &x);
        if f < best_f {
            best_f = f;
            best = x.clone();
        }
    }
    best
}
