//! Inexact augmented Lagrange multiplier (IALM) solver for
//!
//! ```text
//! min_{L,E}  ω1 Σ_i ‖L_f^i‖* + ω2 Σ_j (‖L_h^j‖* + α‖L_h^j‖_{2,1}) + λ‖E‖²_F
//! s.t.       W = L + E,   L_f^i = (L_f^i)ᵀ
//! ```
//!
//! where `L_f^i` are the `n × n` frontal slices and `L_h^j` the `v × n`
//! horizontal slices of the `n × n × v` tensor `L`. Three copies
//! `L1 = L2 = L3 = L` decouple the three regularizers; each copy carries a
//! data-fit constraint `W = L_k + E` (multiplier `Y1k`) and a consensus
//! constraint `L = L_k` (multiplier `Y2k`).
//!
//! One iteration updates `L1, L2, L3`, then `L`, then `E`, then the
//! multipliers and the penalty `μ`.
//!
//! The `L_k` subproblem collects two quadratic penalties in `L_k`:
//!
//! ```text
//! μ/2 ‖W − L_k − E + Y1k/μ‖² + μ/2 ‖L − L_k + Y2k/μ‖²
//!   = μ ‖L_k − ½A_k‖² + const,     A_k = W + L − E + (Y1k + Y2k)/μ
//! ```
//!
//! so minimizing `f_k(L_k) + μ‖L_k − ½A_k‖²` is the same as minimizing
//! `(1/2μ) f_k(L_k) + ½‖L_k − ½A_k‖²`: a proximal step at `½A_k` with the
//! regularizer weight divided by `2μ`. That gives the thresholds `ω1/(2μ)`
//! (symmetric SVT per frontal slice), `ω2/(2μ)` (SVT per horizontal slice)
//! and `ω2·α/(2μ)` (column shrinkage per horizontal slice).

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{invalid, mismatch, Error, Result};
use crate::prox::{shrink_columns, svt, svt_symmetric};
use crate::tensor3::Tensor3;
use crate::Matrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Weight of the frontal-slice term; the horizontal term gets `1 − omega1`.
    pub omega1: f64,
    /// Weight of the column-sparsity term inside the horizontal term.
    pub alpha: f64,
    /// Weight of `‖E‖²_F`.
    pub lambda: f64,
    pub mu0: f64,
    pub rho: f64,
    pub mu_max: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Carried for the downstream clustering stage; the solver itself draws no
    /// random numbers.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::preset(Preset::Coil20)
    }
}

/// Named hyperparameter settings, one per benchmark family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Coil20,
    Yale,
    Orl,
    YaleB,
    Uci,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Coil20, Preset::Yale, Preset::Orl, Preset::YaleB, Preset::Uci];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Coil20 => "coil20",
            Preset::Yale => "yale",
            Preset::Orl => "orl",
            Preset::YaleB => "yaleb",
            Preset::Uci => "uci",
        }
    }

    /// `(omega1, alpha, lambda)`.
    pub fn weights(self) -> (f64, f64, f64) {
        match self {
            Preset::Coil20 | Preset::Yale | Preset::Orl => (0.5, 5.0, 15.0),
            Preset::YaleB => (0.4, 9.0, 15.0),
            Preset::Uci => (0.4, 4.0, 40.0),
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown preset {s:?}")))
    }
}

impl SolverConfig {
    pub fn preset(p: Preset) -> Self {
        let (omega1, alpha, lambda) = p.weights();
        Self {
            omega1,
            alpha,
            lambda,
            mu0: 1e-4,
            rho: 1.1,
            mu_max: 1e8,
            tol: 1e-7,
            max_iter: 300,
            seed: 0,
        }
    }

    pub fn omega2(&self) -> f64 {
        1.0 - self.omega1
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.omega1) {
            return invalid(format!("omega1 must lie in [0, 1], got {}", self.omega1));
        }
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return invalid(format!("alpha must be >= 0, got {}", self.alpha));
        }
        if !self.lambda.is_finite() || self.lambda <= 0.0 {
            return invalid(format!("lambda must be > 0, got {}", self.lambda));
        }
        validate_ialm(self.mu0, self.rho, self.mu_max, self.tol, self.max_iter)
    }
}

fn validate_ialm(mu0: f64, rho: f64, mu_max: f64, tol: f64, max_iter: usize) -> Result<()> {
    if !mu0.is_finite() || mu0 <= 0.0 {
        return invalid(format!("mu0 must be > 0, got {mu0}"));
    }
    if !rho.is_finite() || rho <= 1.0 {
        return invalid(format!("rho must be > 1, got {rho}"));
    }
    if !mu_max.is_finite() || mu_max < mu0 {
        return invalid(format!("mu_max must be finite and >= mu0, got {mu_max}"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return invalid(format!("tol must be > 0, got {tol}"));
    }
    if max_iter == 0 {
        return invalid("max_iter must be positive");
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualRecord {
    pub iter: usize,
    /// `max_k ‖W − L_k − E‖_F / ‖W‖_F`.
    pub r1: f64,
    /// `max_k ‖L − L_k‖_F / ‖W‖_F`.
    pub r2: f64,
    /// Penalty in effect while the iteration's primal updates ran.
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct SolverState {
    pub l: Tensor3,
    pub l_k: [Tensor3; 3],
    pub e: Tensor3,
    /// Multipliers of `W = L_k + E`.
    pub y1: [Tensor3; 3],
    /// Multipliers of `L = L_k`.
    pub y2: [Tensor3; 3],
    pub mu: f64,
    pub iter: usize,
    pub residual_history: Vec<ResidualRecord>,
}

impl SolverState {
    /// All-zero iterates with `μ = mu0`.
    pub fn zeros(dims: [usize; 3], config: &SolverConfig) -> Result<Self> {
        let z = Tensor3::zeros(dims[0], dims[1], dims[2])?;
        Ok(Self {
            l: z.clone(),
            l_k: [z.clone(), z.clone(), z.clone()],
            e: z.clone(),
            y1: [z.clone(), z.clone(), z.clone()],
            y2: [z.clone(), z.clone(), z.clone()],
            mu: config.mu0,
            iter: 0,
            residual_history: Vec::new(),
        })
    }

    fn check_shape(&self, w: &Tensor3) -> Result<()> {
        let d = w.dims();
        let all = std::iter::once(&self.l)
            .chain(&self.l_k)
            .chain(std::iter::once(&self.e))
            .chain(&self.y1)
            .chain(&self.y2);
        for t in all {
            if t.dims() != d {
                return mismatch(format!("state tensor {:?} does not match W {:?}", t.dims(), d));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub iterations: usize,
    pub r1: f64,
    pub r2: f64,
    pub converged: bool,
    pub wall_time: Duration,
}

impl fmt::Display for SolverReport {
    /// One `key=value` pair per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "iterations={}", self.iterations)?;
        writeln!(f, "r1={:?}", self.r1)?;
        writeln!(f, "r2={:?}", self.r2)?;
        writeln!(f, "converged={}", self.converged)?;
        writeln!(f, "wall_time_s={:?}", self.wall_time.as_secs_f64())
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub l: Tensor3,
    /// Final auxiliary copies of `L` (`L1, L2, L3`, or the per-mode copies of
    /// the sum-of-nuclear-norms baseline).
    pub l_k: [Tensor3; 3],
    pub e: Tensor3,
    pub report: SolverReport,
    pub residual_history: Vec<ResidualRecord>,
}

/// Applies `f` elementwise over equally shaped tensors into a fresh tensor.
fn zip_with<const N: usize>(inputs: [&Tensor3; N], f: impl Fn([f64; N]) -> f64) -> Tensor3 {
    let mut out = inputs[0].clone();
    let data = out.as_mut_slice();
    for (idx, slot) in data.iter_mut().enumerate() {
        *slot = f(std::array::from_fn(|m| inputs[m].as_slice()[idx]));
    }
    out
}

/// `½A_k` with `A_k = W + L − E + (Y1k + Y2k)/μ`.
fn half_prox_target(state: &SolverState, w: &Tensor3, k: usize) -> Tensor3 {
    let mu = state.mu;
    zip_with([w, &state.l, &state.e, &state.y1[k], &state.y2[k]], |[w, l, e, y1, y2]| {
        0.5 * (w + l - e + (y1 + y2) / mu)
    })
}

/// `E = μ Σ_k (W − L_k + Y1k/μ) / (2λ + 3μ)`.
pub fn update_e(state: &SolverState, w: &Tensor3, config: &SolverConfig) -> Result<Tensor3> {
    state.check_shape(w)?;
    let mu = state.mu;
    let denom = 2.0 * config.lambda + 3.0 * mu;
    let [l1, l2, l3] = &state.l_k;
    let [y11, y12, y13] = &state.y1;
    Ok(zip_with([w, l1, l2, l3, y11, y12, y13], |[w, l1, l2, l3, a, b, c]| {
        (mu * (3.0 * w - l1 - l2 - l3) + a + b + c) / denom
    }))
}

/// `L = (1/3) Σ_k (L_k − Y2k/μ)`.
pub fn update_l(state: &SolverState) -> Result<Tensor3> {
    let d = state.l.dims();
    if state.l_k.iter().chain(&state.y2).any(|t| t.dims() != d) {
        return mismatch("state tensors have inconsistent shapes");
    }
    let mu = state.mu;
    let [l1, l2, l3] = &state.l_k;
    let [a, b, c] = &state.y2;
    Ok(zip_with([l1, l2, l3, a, b, c], |[l1, l2, l3, a, b, c]| (l1 + l2 + l3 - (a + b + c) / mu) / 3.0))
}

/// Symmetric SVT of every frontal slice of `½A_1` at threshold `ω1/(2μ)`.
pub fn update_l1(state: &SolverState, w: &Tensor3, config: &SolverConfig) -> Result<Tensor3> {
    state.check_shape(w)?;
    if !w.is_square_frontal() {
        return mismatch("frontal slices must be square");
    }
    let target = half_prox_target(state, w, 0);
    let tau = config.omega1 / (2.0 * state.mu);
    let v = w.dims()[2];
    let slices: Vec<Matrix> = (0..v)
        .into_par_iter()
        .map(|i| {
            let a = target.frontal_slice(i)?;
            if tau == 0.0 {
                Ok((&a + a.transpose()) * 0.5)
            } else {
                svt_symmetric(&a, tau)
            }
        })
        .collect::<Result<_>>()?;
    Tensor3::stack_frontal(&slices)
}

/// SVT of every horizontal slice of `½A_2` at threshold `ω2/(2μ)`.
pub fn update_l2(state: &SolverState, w: &Tensor3, config: &SolverConfig) -> Result<Tensor3> {
    state.check_shape(w)?;
    let target = half_prox_target(state, w, 1);
    let tau = config.omega2() / (2.0 * state.mu);
    if tau == 0.0 {
        return Ok(target);
    }
    map_horizontal(&target, |h| svt(&h, tau))
}

/// Column shrinkage of every horizontal slice of `½A_3` at threshold
/// `ω2·α/(2μ)`. Column `b` of horizontal slice `j` holds `A_3(j, b, :)`.
pub fn update_l3(state: &SolverState, w: &Tensor3, config: &SolverConfig) -> Result<Tensor3> {
    state.check_shape(w)?;
    let target = half_prox_target(state, w, 2);
    let tau = config.omega2() * config.alpha / (2.0 * state.mu);
    map_horizontal(&target, |h| shrink_columns(&h, tau))
}

fn map_horizontal(t: &Tensor3, f: impl Fn(Matrix) -> Result<Matrix> + Sync) -> Result<Tensor3> {
    let n1 = t.dims()[0];
    let slices: Vec<Matrix> =
        (0..n1).into_par_iter().map(|j| f(t.horizontal_slice(j)?)).collect::<Result<_>>()?;
    let mut out = t.clone();
    for (j, s) in slices.iter().enumerate() {
        out.set_horizontal_slice(j, s)?;
    }
    Ok(out)
}

fn residuals(state: &SolverState, w: &Tensor3) -> (f64, f64) {
    let scale = normalizer(w);
    let mut r1 = 0.0f64;
    let mut r2 = 0.0f64;
    for lk in &state.l_k {
        let d1: f64 = zip_with([w, lk, &state.e], |[w, l, e]| w - l - e).frobenius_norm();
        let d2: f64 = zip_with([&state.l, lk], |[l, lk]| l - lk).frobenius_norm();
        r1 = r1.max(d1 / scale);
        r2 = r2.max(d2 / scale);
    }
    (r1, r2)
}

fn normalizer(w: &Tensor3) -> f64 {
    let n = w.frobenius_norm();
    if n > 0.0 {
        n
    } else {
        1.0
    }
}

/// Dual ascent `Y1k += μ(W − L_k − E)`, `Y2k += μ(L − L_k)`, then
/// `μ ← min(ρμ, μ_max)`.
pub fn update_multipliers(state: &mut SolverState, w: &Tensor3, config: &SolverConfig) -> Result<()> {
    state.check_shape(w)?;
    let mu = state.mu;
    for k in 0..3 {
        state.y1[k] = zip_with([&state.y1[k], w, &state.l_k[k], &state.e], |[y, w, l, e]| y + mu * (w - l - e));
        state.y2[k] = zip_with([&state.y2[k], &state.l, &state.l_k[k]], |[y, l, lk]| y + mu * (l - lk));
    }
    state.mu = (config.rho * mu).min(config.mu_max);
    Ok(())
}

/// Runs one full iteration in place and returns its residuals.
pub fn step(state: &mut SolverState, w: &Tensor3, config: &SolverConfig) -> Result<ResidualRecord> {
    let l1 = update_l1(state, w, config)?;
    let l2 = update_l2(state, w, config)?;
    let l3 = update_l3(state, w, config)?;
    state.l_k = [l1, l2, l3];
    state.l = update_l(state)?;
    state.e = update_e(state, w, config)?;
    let (r1, r2) = residuals(state, w);
    let record = ResidualRecord { iter: state.iter + 1, r1, r2, mu: state.mu };
    update_multipliers(state, w, config)?;
    state.iter += 1;
    state.residual_history.push(record);
    Ok(record)
}

fn check_input(w: &Tensor3) -> Result<()> {
    if !w.is_square_frontal() {
        return mismatch(format!("input must be n x n x v, got {:?}", w.dims()));
    }
    if w.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("input tensor"));
    }
    Ok(())
}

/// Solves the recovery problem from all-zero iterates until both relative
/// residuals drop to `tol` or `max_iter` iterations have run.
///
/// The consensus iterate `L` averages the three copies and only meets the
/// frontal symmetry constraint up to the consensus residual, so the returned
/// `L` is its projection `½(L_f^i + L_f^iᵀ)` onto symmetric frontal slices.
pub fn solve(w: &Tensor3, config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    check_input(w)?;
    let start = Instant::now();
    let mut state = SolverState::zeros(w.dims(), config)?;
    let mut last = ResidualRecord { iter: 0, r1: f64::INFINITY, r2: f64::INFINITY, mu: state.mu };
    let mut converged = false;
    while state.iter < config.max_iter {
        last = step(&mut state, w, config)?;
        if last.r1 <= config.tol && last.r2 <= config.tol {
            converged = true;
            break;
        }
    }
    let report = SolverReport {
        iterations: state.iter,
        r1: last.r1,
        r2: last.r2,
        converged,
        wall_time: start.elapsed(),
    };
    Ok(Solution { l: symmetrize_frontal(&state.l), l_k: state.l_k, e: state.e, report, residual_history: state.residual_history })
}

fn symmetrize_frontal(t: &Tensor3) -> Tensor3 {
    let [n, _, v] = t.dims();
    let mut out = t.clone();
    for k in 0..v {
        for b in 0..n {
            for a in (b + 1)..n {
                let x = 0.5 * (t.get(a, b, k) + t.get(b, a, k));
                out.set(a, b, k, x);
                out.set(b, a, k, x);
            }
        }
    }
    out
}

/// Averages the frontal slices, clamps negatives and symmetrizes:
/// `S = ½(P + Pᵀ)` with `P = max(mean_i L_f^i, 0)`.
pub fn fuse(l: &Tensor3) -> Result<Matrix> {
    if !l.is_square_frontal() {
        return mismatch(format!("fuse needs square frontal slices, got {:?}", l.dims()));
    }
    let [n, _, v] = l.dims();
    let mut mean = Matrix::zeros(n, n);
    for i in 0..v {
        for (m, x) in mean.as_mut_slice().iter_mut().zip(l.frontal_data(i)) {
            *m += x;
        }
    }
    let pos = mean.map(|x| (x / v as f64).max(0.0));
    Ok((&pos + pos.transpose()) * 0.5)
}

/// Sum-of-nuclear-norms baseline settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnnConfig {
    /// Weights of the mode-1, mode-2 and mode-3 unfolding nuclear norms.
    pub zeta: [f64; 3],
    pub lambda: f64,
    pub mu0: f64,
    pub rho: f64,
    pub mu_max: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl SnnConfig {
    /// Same IALM controls and `λ` as `config`, equal unit mode weights.
    pub fn from_solver(config: &SolverConfig) -> Self {
        Self {
            zeta: [1.0; 3],
            lambda: config.lambda,
            mu0: config.mu0,
            rho: config.rho,
            mu_max: config.mu_max,
            tol: config.tol,
            max_iter: config.max_iter,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.zeta.iter().any(|z| !z.is_finite() || *z < 0.0) {
            return invalid(format!("zeta weights must be >= 0, got {:?}", self.zeta));
        }
        if !self.lambda.is_finite() || self.lambda <= 0.0 {
            return invalid(format!("lambda must be > 0, got {}", self.lambda));
        }
        validate_ialm(self.mu0, self.rho, self.mu_max, self.tol, self.max_iter)
    }
}

/// IALM for `min Σ_m ζ_m ‖unfold_m(L)‖* + λ‖E‖²_F  s.t.  W = L + E`, using
/// copies `M_m = L` (multipliers `Y_m`) and the data constraint (multiplier
/// `Y0`). Each `M_m` update is an SVT of `unfold_m(L + Y_m/μ)` at `ζ_m/μ`.
///
/// The report uses `r1 = ‖W − L − E‖_F/‖W‖_F` and
/// `r2 = max_m ‖L − M_m‖_F/‖W‖_F`.
pub fn solve_snn(w: &Tensor3, config: &SnnConfig) -> Result<Solution> {
    config.validate()?;
    check_input(w)?;
    let start = Instant::now();
    let dims = w.dims();
    let zero = Tensor3::zeros(dims[0], dims[1], dims[2])?;
    let mut l = zero.clone();
    let mut e = zero.clone();
    let mut y: [Tensor3; 3] = [zero.clone(), zero.clone(), zero.clone()];
    let mut y0 = zero.clone();
    let mut copies: [Tensor3; 3] = [zero.clone(), zero.clone(), zero];
    let mut mu = config.mu0;
    let scale = normalizer(w);
    let mut history = Vec::new();
    let mut converged = false;
    let (mut r1, mut r2) = (f64::INFINITY, f64::INFINITY);

    for iter in 1..=config.max_iter {
        let updated: Vec<Tensor3> = (0..3)
            .into_par_iter()
            .map(|k| {
                let target = zip_with([&l, &y[k]], |[l, y]| l + y / mu);
                let tau = config.zeta[k] / mu;
                if tau == 0.0 {
                    return Ok(target);
                }
                let mode = k + 1;
                Tensor3::fold(&svt(&target.unfold(mode)?, tau)?, mode, dims)
            })
            .collect::<Result<_>>()?;
        let m: [Tensor3; 3] = updated.try_into().expect("three modes");

        let [m1, m2, m3] = &m;
        let [ya, yb, yc] = &y;
        l = zip_with([w, &e, &y0, m1, m2, m3, ya, yb, yc], |[w, e, y0, m1, m2, m3, a, b, c]| {
            (w - e + y0 / mu + m1 + m2 + m3 - (a + b + c) / mu) / 4.0
        });
        let denom = 2.0 * config.lambda + mu;
        e = zip_with([w, &l, &y0], |[w, l, y0]| (mu * (w - l) + y0) / denom);

        let data_res = zip_with([w, &l, &e], |[w, l, e]| w - l - e);
        r1 = data_res.frobenius_norm() / scale;
        r2 = m.iter().map(|mk| zip_with([&l, mk], |[l, m]| l - m).frobenius_norm() / scale).fold(0.0, f64::max);
        history.push(ResidualRecord { iter, r1, r2, mu });

        y0 = zip_with([&y0, &data_res], |[y, r]| y + mu * r);
        for k in 0..3 {
            y[k] = zip_with([&y[k], &l, &m[k]], |[y, l, mk]| y + mu * (l - mk));
        }
        mu = (config.rho * mu).min(config.mu_max);
        copies = m;

        if r1 <= config.tol && r2 <= config.tol {
            converged = true;
            break;
        }
    }
    let report = SolverReport { iterations: history.len(), r1, r2, converged, wall_time: start.elapsed() };
    Ok(Solution { l, l_k: copies, e, report, residual_history: history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(rng: &mut ChaCha8Rng, dims: [usize; 3]) -> Tensor3 {
        Tensor3::from_fn(dims, |_, _, _| rng.random_range(-1.0..1.0)).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng, dims: [usize; 3], mu: f64) -> SolverState {
        let mut s = SolverState::zeros(dims, &SolverConfig::default()).unwrap();
        s.l = random_tensor(rng, dims);
        s.e = random_tensor(rng, dims);
        for k in 0..3 {
            s.l_k[k] = random_tensor(rng, dims);
            s.y1[k] = random_tensor(rng, dims);
            s.y2[k] = random_tensor(rng, dims);
        }
        s.mu = mu;
        s
    }

    fn constant(dims: [usize; 3], c: f64) -> Tensor3 {
        Tensor3::from_fn(dims, |_, _, _| c).unwrap()
    }

    #[test]
    fn presets_match_published_settings() {
        assert_eq!(Preset::Coil20.weights(), (0.5, 5.0, 15.0));
        assert_eq!(Preset::Yale.weights(), (0.5, 5.0, 15.0));
        assert_eq!(Preset::Orl.weights(), (0.5, 5.0, 15.0));
        assert_eq!(Preset::YaleB.weights(), (0.4, 9.0, 15.0));
        assert_eq!(Preset::Uci.weights(), (0.4, 4.0, 40.0));
        let c = SolverConfig::default();
        assert_eq!((c.mu0, c.mu_max, c.rho, c.tol, c.max_iter), (1e-4, 1e8, 1.1, 1e-7, 300));
        assert_eq!(c.omega1 + c.omega2(), 1.0);
        assert_eq!("YaleB".parse::<Preset>().unwrap(), Preset::YaleB);
        assert!("mnist".parse::<Preset>().is_err());
    }

    #[test]
    fn config_validation() {
        let ok = SolverConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            SolverConfig { omega1: 1.5, ..ok },
            SolverConfig { alpha: -1.0, ..ok },
            SolverConfig { lambda: 0.0, ..ok },
            SolverConfig { mu0: 0.0, ..ok },
            SolverConfig { rho: 1.0, ..ok },
            SolverConfig { mu_max: 1e-5, ..ok },
            SolverConfig { tol: 0.0, ..ok },
            SolverConfig { max_iter: 0, ..ok },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn update_e_cases() {
        let dims = [2, 2, 1];
        let z = Tensor3::zeros(2, 2, 1).unwrap();
        let cfg = SolverConfig { lambda: 1.0, ..SolverConfig::default() };
        let mut s = SolverState::zeros(dims, &cfg).unwrap();
        assert_eq!(update_e(&s, &z, &cfg).unwrap().max_abs(), 0.0);

        s.mu = 1.0;
        let w = constant(dims, 2.0);
        let e = update_e(&s, &w, &cfg).unwrap();
        // 2λe = μ Σ_k (w − e)  ⇒  e = 3w/5 for λ = μ = 1
        assert!(e.as_slice().iter().all(|&x| (x - 1.2).abs() < 1e-15));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_state(&mut rng, [3, 3, 2], 0.37);
        let w = random_tensor(&mut rng, [3, 3, 2]);
        let e = update_e(&s, &w, &cfg).unwrap();
        for idx in 0..e.len() {
            let ev = e.as_slice()[idx];
            let grad: f64 = 2.0 * cfg.lambda * ev
                - (0..3)
                    .map(|k| {
                        s.mu * (w.as_slice()[idx] - s.l_k[k].as_slice()[idx] - ev)
                            + s.y1[k].as_slice()[idx]
                    })
                    .sum::<f64>();
            assert!(grad.abs() <= 1e-10);
        }
        assert!(update_e(&s, &Tensor3::zeros(2, 2, 2).unwrap(), &cfg).is_err());
    }

    #[test]
    fn update_l_cases() {
        let dims = [3, 3, 2];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut s = SolverState::zeros(dims, &SolverConfig::default()).unwrap();
        let t = random_tensor(&mut rng, dims);
        s.l_k = [t.clone(), t.clone(), t.clone()];
        assert_eq!(update_l(&s).unwrap(), t);

        s.l_k = [constant(dims, 3.0), constant(dims, 6.0), constant(dims, 9.0)];
        assert!(update_l(&s).unwrap().as_slice().iter().all(|&x| x == 6.0));

        let s = random_state(&mut rng, dims, 0.8);
        let mut scaled = s.clone();
        for k in 0..3 {
            scaled.l_k[k] = s.l_k[k].scale(2.5);
            scaled.y2[k] = s.y2[k].scale(2.5);
        }
        let a = update_l(&s).unwrap().scale(2.5);
        let b = update_l(&scaled).unwrap();
        assert!(a.sub(&b).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn proximal_updates_on_zero_state() {
        let dims = [4, 4, 3];
        let cfg = SolverConfig::default();
        let s = SolverState::zeros(dims, &cfg).unwrap();
        let w = Tensor3::zeros(4, 4, 3).unwrap();
        for f in [update_l1, update_l2, update_l3] {
            assert_eq!(f(&s, &w, &cfg).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn update_l1_diagonal_slice() {
        // A_1 slice = diag(3, 1) with ω1/(2μ) = ½ ⇒ prox of diag(1.5, 0.5) → diag(1, 0)
        let cfg = SolverConfig { omega1: 0.5, ..SolverConfig::default() };
        let mut s = SolverState::zeros([2, 2, 1], &cfg).unwrap();
        s.mu = 0.5;
        let w = Tensor3::from_fn([2, 2, 1], |a, b, _| match (a, b) {
            (0, 0) => 3.0,
            (1, 1) => 1.0,
            _ => 0.0,
        })
        .unwrap();
        let l1 = update_l1(&s, &w, &cfg).unwrap();
        let expected = [1.0, 0.0, 0.0, 0.0];
        for (x, y) in l1.as_slice().iter().zip(expected) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn update_l2_diagonal_slice() {
        // horizontal slice 0 of A_2 = [[3, 0], [0, 1]] (v = 2, n = 2)
        let cfg = SolverConfig { omega1: 0.5, ..SolverConfig::default() };
        let mut s = SolverState::zeros([2, 2, 2], &cfg).unwrap();
        s.mu = 0.5;
        let w = Tensor3::from_fn([2, 2, 2], |a, b, k| match (a, b, k) {
            (0, 0, 0) => 3.0,
            (0, 1, 1) => 1.0,
            _ => 0.0,
        })
        .unwrap();
        let l2 = update_l2(&s, &w, &cfg).unwrap();
        let h = l2.horizontal_slice(0).unwrap();
        assert!((h[(0, 0)] - 1.0).abs() < 1e-14);
        assert!(h[(1, 1)].abs() < 1e-14 && h[(0, 1)].abs() < 1e-14 && h[(1, 0)].abs() < 1e-14);
        assert_eq!(l2.horizontal_slice(1).unwrap().norm(), 0.0);
    }

    #[test]
    fn update_l3_single_column() {
        // column (0, 0, :) of ½A_3 = [3, 4], threshold ω2α/(2μ) = 2
        let cfg = SolverConfig { omega1: 0.5, alpha: 2.0, ..SolverConfig::default() };
        let mut s = SolverState::zeros([1, 1, 2], &cfg).unwrap();
        s.mu = 0.25;
        let w = Tensor3::from_vec([1, 1, 2], vec![6.0, 8.0]).unwrap();
        let l3 = update_l3(&s, &w, &cfg).unwrap();
        assert!((l3.get(0, 0, 0) - 1.8).abs() < 1e-14 && (l3.get(0, 0, 1) - 2.4).abs() < 1e-14);

        let big = SolverConfig { alpha: 100.0, ..cfg };
        assert_eq!(update_l3(&s, &w, &big).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn update_l1_slices_are_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = SolverConfig::default();
        for _ in 0..5 {
            let mu = rng.random_range(0.1..2.0);
            let s = random_state(&mut rng, [6, 6, 3], mu);
            let w = random_tensor(&mut rng, [6, 6, 3]);
            let l1 = update_l1(&s, &w, &cfg).unwrap();
            for i in 0..3 {
                let f = l1.frontal_slice(i).unwrap();
                assert!((&f - f.transpose()).amax() <= 1e-10);
            }
        }
    }

    #[test]
    fn multiplier_updates() {
        let dims = [2, 2, 2];
        let cfg = SolverConfig::default();
        let mut s = SolverState::zeros(dims, &cfg).unwrap();
        let w = Tensor3::zeros(2, 2, 2).unwrap();
        update_multipliers(&mut s, &w, &cfg).unwrap();
        assert!(s.y1.iter().chain(&s.y2).all(|y| y.max_abs() == 0.0));
        assert_eq!(s.mu, cfg.mu0 * cfg.rho);

        s.mu = cfg.mu_max;
        update_multipliers(&mut s, &w, &cfg).unwrap();
        assert_eq!(s.mu, cfg.mu_max);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut s = random_state(&mut rng, dims, 0.3);
        for k in 0..3 {
            s.y1[k] = Tensor3::zeros(2, 2, 2).unwrap();
            s.y2[k] = Tensor3::zeros(2, 2, 2).unwrap();
        }
        let before = s.clone();
        let w = random_tensor(&mut rng, dims);
        update_multipliers(&mut s, &w, &cfg).unwrap();
        for k in 0..3 {
            let r1 = w.sub(&before.l_k[k]).unwrap().sub(&before.e).unwrap().scale(0.3);
            let r2 = before.l.sub(&before.l_k[k]).unwrap().scale(0.3);
            assert!(s.y1[k].sub(&r1).unwrap().max_abs() < 1e-15);
            assert!(s.y2[k].sub(&r2).unwrap().max_abs() < 1e-15);
        }
    }

    /// `(1/2μ) f_k(X) + ½‖X − ½A_k‖²` evaluated directly from slices.
    fn lk_objective(k: usize, x: &Tensor3, s: &SolverState, w: &Tensor3, cfg: &SolverConfig) -> f64 {
        use crate::prox::{l21_norm, nuclear_norm};
        let target = half_prox_target(s, w, k);
        let [n, _, v] = x.dims();
        let reg = match k {
            0 => cfg.omega1 * (0..v).map(|i| nuclear_norm(&x.frontal_slice(i).unwrap()).unwrap()).sum::<f64>(),
            1 => cfg.omega2() * (0..n).map(|j| nuclear_norm(&x.horizontal_slice(j).unwrap()).unwrap()).sum::<f64>(),
            _ => cfg.omega2() * cfg.alpha * (0..n).map(|j| l21_norm(&x.horizontal_slice(j).unwrap())).sum::<f64>(),
        };
        reg / (2.0 * s.mu) + 0.5 * x.sub(&target).unwrap().frobenius_norm().powi(2)
    }

    #[test]
    fn subproblem_descent_along_a_run() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let base = random_tensor(&mut rng, [5, 5, 3]);
        // symmetric W so the L1 constraint set contains the previous iterate
        let w = Tensor3::from_fn([5, 5, 3], |a, b, k| 0.5 * (base.get(a, b, k) + base.get(b, a, k))).unwrap();
        let cfg = SolverConfig::default();
        let mut s = SolverState::zeros(w.dims(), &cfg).unwrap();
        for _ in 0..15 {
            let updates = [update_l1(&s, &w, &cfg).unwrap(), update_l2(&s, &w, &cfg).unwrap(), update_l3(&s, &w, &cfg).unwrap()];
            for (k, new) in updates.iter().enumerate() {
                let before = lk_objective(k, &s.l_k[k], &s, &w, &cfg);
                let after = lk_objective(k, new, &s, &w, &cfg);
                assert!(after <= before + 1e-9 * before.abs().max(1.0), "k={k}: {after} > {before}");
            }
            step(&mut s, &w, &cfg).unwrap();
        }
    }

    #[test]
    fn zero_input_converges_immediately() {
        let w = Tensor3::zeros(4, 4, 2).unwrap();
        let sol = solve(&w, &SolverConfig::default()).unwrap();
        assert!(sol.report.converged);
        assert_eq!(sol.report.iterations, 1);
        assert_eq!(sol.l.max_abs(), 0.0);
        assert_eq!(sol.e.max_abs(), 0.0);
        let snn = solve_snn(&w, &SnnConfig::from_solver(&SolverConfig::default())).unwrap();
        assert!(snn.report.converged && snn.l.max_abs() == 0.0 && snn.e.max_abs() == 0.0);
    }

    #[test]
    fn solve_rejects_bad_input() {
        let cfg = SolverConfig::default();
        assert!(solve(&Tensor3::zeros(2, 3, 2).unwrap(), &cfg).is_err());
        let mut w = Tensor3::zeros(2, 2, 1).unwrap();
        w.as_mut_slice()[0] = f64::NAN;
        assert!(matches!(solve(&w, &cfg), Err(Error::NonFinite(_))));
        assert!(solve(&Tensor3::zeros(2, 2, 1).unwrap(), &SolverConfig { lambda: -1.0, ..cfg }).is_err());
    }

    #[test]
    fn solve_is_deterministic_and_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let base = random_tensor(&mut rng, [8, 8, 3]).map(f64::abs);
        let w = Tensor3::from_fn([8, 8, 3], |a, b, k| 0.5 * (base.get(a, b, k) + base.get(b, a, k))).unwrap();
        let cfg = SolverConfig::default();
        let a = solve(&w, &cfg).unwrap();
        let b = solve(&w, &cfg).unwrap();
        assert_eq!(a.l, b.l);
        assert_eq!(a.e, b.e);
        assert_eq!(a.residual_history, b.residual_history);
        assert!(a.report.converged, "{:?}", a.report);
        let feas = w.sub(&a.l).unwrap().sub(&a.e).unwrap().frobenius_norm() / w.frobenius_norm();
        assert!(feas <= 10.0 * cfg.tol);
    }

    #[test]
    fn returned_slices_are_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let w = random_tensor(&mut rng, [7, 7, 3]).map(f64::abs);
        let sol = solve(&w, &SolverConfig::default()).unwrap();
        for k in 0..3 {
            let s = sol.l.frontal_slice(k).unwrap();
            assert_eq!(s, s.transpose());
        }
    }

    #[test]
    fn ablations_run() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let base = random_tensor(&mut rng, [6, 6, 2]).map(f64::abs);
        let w = Tensor3::from_fn([6, 6, 2], |a, b, k| 0.5 * (base.get(a, b, k) + base.get(b, a, k))).unwrap();
        let cfg = SolverConfig::default();
        for c in [SolverConfig { alpha: 0.0, ..cfg }, SolverConfig { omega1: 0.0, ..cfg }, SolverConfig { omega1: 1.0, ..cfg }] {
            let sol = solve(&w, &c).unwrap();
            assert!(sol.report.converged, "{c:?}: {:?}", sol.report);
        }
    }

    #[test]
    fn fuse_cases() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, -2.0, 0.5, 3.0]);
        let t = Tensor3::stack_frontal(&[m.clone(), m.clone(), m.clone()]).unwrap();
        let s = fuse(&t).unwrap();
        let expected = Matrix::from_row_slice(2, 2, &[1.0, 0.25, 0.25, 3.0]);
        assert!((s - expected).amax() < 1e-15);

        let a = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let b = Matrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 1.0]);
        let s = fuse(&Tensor3::stack_frontal(&[a, b]).unwrap()).unwrap();
        assert_eq!(s, Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]));

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = fuse(&random_tensor(&mut rng, [5, 5, 3])).unwrap();
        assert_eq!(s, s.transpose());
        assert!(s.iter().all(|&x| x >= 0.0));
        assert!(fuse(&Tensor3::zeros(2, 3, 1).unwrap()).is_err());
    }

    #[test]
    fn snn_recovers_rank_one_tensor() {
        let a = [0.9, 0.5, 0.2, 0.7, 0.4];
        let c = [1.0, 0.8, 1.2];
        let w = Tensor3::from_fn([5, 5, 3], |i, j, k| a[i] * a[j] * c[k]).unwrap();
        let cfg = SnnConfig { tol: 1e-7, ..SnnConfig::from_solver(&SolverConfig::default()) };
        let sol = solve_snn(&w, &cfg).unwrap();
        assert!(sol.report.converged, "{:?}", sol.report);
        assert!(sol.report.r1 <= 1e-6 && sol.report.r2 <= 1e-6);
        let feas = w.sub(&sol.l).unwrap().sub(&sol.e).unwrap().frobenius_norm() / w.frobenius_norm();
        assert!(feas <= 10.0 * cfg.tol);
    }

    #[test]
    fn report_is_key_value() {
        let r = SolverReport { iterations: 3, r1: 0.5, r2: 0.25, converged: false, wall_time: Duration::from_millis(1500) };
        let text = r.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["iterations=3", "r1=0.5", "r2=0.25", "converged=false", "wall_time_s=1.5"]);
    }
}
