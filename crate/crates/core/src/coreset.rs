//! Frank-Wolfe batch construction over the polytope
//! `{w ≥ 0, Σ_m w_m σ_m = σ}`, minimizing `‖L − L(w)‖² = (1 − w)ᵀK(1 − w)`.
//!
//! Each iteration moves toward the vertex `(σ/σ_f)·1_f` of the pool point
//! whose normalized vector is most aligned with the residual, using the
//! closed-form line search. Indices may be re-selected, so after `b`
//! iterations at most `b` weights are nonzero.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{dot, project, KernelProvider, ProjectionMatrix};
use crate::models::Model;

/// Relative residual below which the remaining iterations are skipped.
pub const EXACT_FIT_TOL: f64 = 1e-12;

/// Points whose norm is at most this fraction of the largest norm are
/// treated as degenerate and never selected.
pub const DEGENERATE_NORM_TOL: f64 = 1e-12;

/// Frank-Wolfe iterate together with the cached inner products needed to
/// score candidates and compute line-search steps in `O(M)` per iteration.
#[derive(Debug, Clone)]
pub struct FwState {
    weights: Vec<f64>,
    norms: Vec<f64>,
    sigma: f64,
    iteration: usize,
    selected: Vec<usize>,
    gammas: Vec<f64>,
    objectives: Vec<f64>,
    // ⟨L, L_n⟩
    total_inner: Vec<f64>,
    // ⟨L(w), L_n⟩
    weighted_inner: Vec<f64>,
    // ⟨L, L⟩, ⟨L(w), L⟩, ⟨L(w), L(w)⟩
    total_sq: f64,
    cross: f64,
    weighted_sq: f64,
    column: Vec<f64>,
}

impl FwState {
    /// Initial state `w = 0`. Fails if every norm is zero.
    pub fn new<K: KernelProvider + ?Sized>(kernel: &K) -> Result<Self> {
        let size = kernel.pool_size();
        let mut norms: Vec<f64> = (0..size).map(|n| kernel.norm(n)).collect();
        if let Some(n) = norms.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteKernel { row: n, col: n });
        }
        let largest = norms.iter().copied().fold(0.0, f64::max);
        if largest <= 0.0 {
            return Err(Error::EmptyPool);
        }
        for v in norms.iter_mut() {
            if *v <= DEGENERATE_NORM_TOL * largest {
                *v = 0.0;
            }
        }
        let sigma = norms.iter().sum();
        let total_inner = kernel.total_inner();
        if let Some(n) = total_inner.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteKernel { row: n, col: n });
        }
        let total_sq = total_inner.iter().sum();
        Ok(FwState {
            weights: vec![0.0; size],
            norms,
            sigma,
            iteration: 0,
            selected: Vec::new(),
            gammas: Vec::new(),
            objectives: vec![total_sq],
            total_inner,
            weighted_inner: vec![0.0; size],
            total_sq,
            cross: 0.0,
            weighted_sq: 0.0,
            column: vec![0.0; size],
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Per-point norms `σ_n`; degenerate points carry 0.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// `σ = Σ_n σ_n`
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Index chosen at each iteration, in order.
    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    /// Step size taken at each iteration.
    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    /// Relaxed objective `(1 − w)ᵀK(1 − w)` before the first and after every
    /// iteration.
    pub fn objective_history(&self) -> &[f64] {
        &self.objectives
    }

    /// `‖L − L(w)‖²` at the current weights.
    pub fn residual_sq(&self) -> f64 {
        (self.total_sq - 2.0 * self.cross + self.weighted_sq).max(0.0)
    }

    /// `‖L‖²`
    pub fn total_sq(&self) -> f64 {
        self.total_sq
    }

    /// Alignment `⟨L − L(w), L_n / σ_n⟩` of every candidate; `None` for
    /// degenerate points.
    pub fn scores(&self) -> Vec<Option<f64>> {
        (0..self.weights.len()).map(|n| self.score(n)).collect()
    }

    fn score(&self, n: usize) -> Option<f64> {
        let s = self.norms[n];
        (s > 0.0).then(|| (self.total_inner[n] - self.weighted_inner[n]) / s)
    }

    /// Best-aligned candidate, lowest index on ties.
    pub fn select(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for n in 0..self.weights.len() {
            if let Some(s) = self.score(n) {
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((n, s));
                }
            }
        }
        best.map(|(n, _)| n)
    }

    fn check_index(&self, f: usize) -> Result<()> {
        if f >= self.weights.len() {
            return Err(Error::IndexOutOfRange {
                index: f,
                len: self.weights.len(),
            });
        }
        if self.norms[f] <= 0.0 {
            return Err(Error::InvalidArgument(format!("point {f} has zero norm")));
        }
        Ok(())
    }

    /// `w ← (1 − γ)w + γ(σ/σ_f)1_f`, updating every cached quantity.
    pub fn apply_step<K: KernelProvider + ?Sized>(&mut self, kernel: &K, f: usize, gamma: f64) -> Result<()> {
        self.check_index(f)?;
        let c = self.sigma / self.norms[f];
        let mut column = std::mem::take(&mut self.column);
        kernel.column(f, &mut column);
        let k_ff = column[f];
        let a_f = self.weighted_inner[f];
        let keep = 1.0 - gamma;
        let step = gamma * c;
        for (a, k) in self.weighted_inner.iter_mut().zip(&column) {
            *a = keep * *a + step * k;
        }
        self.column = column;
        self.weighted_sq = keep * keep * self.weighted_sq + 2.0 * keep * step * a_f + step * step * k_ff;
        self.cross = keep * self.cross + step * self.total_inner[f];
        for w in self.weights.iter_mut() {
            *w *= keep;
        }
        self.weights[f] += step;
        self.iteration += 1;
        self.selected.push(f);
        self.gammas.push(gamma);
        self.objectives.push(self.residual_sq());
        Ok(())
    }
}

/// Closed-form line search toward vertex `f`:
/// `γ = ⟨cL_f − L(w), L − L(w)⟩ / ‖cL_f − L(w)‖²`, `c = σ/σ_f`, clamped to `[0, 1]`.
pub fn fw_step_gamma<K: KernelProvider + ?Sized>(kernel: &K, state: &FwState, f: usize) -> Result<f64> {
    state.check_index(f)?;
    let c = state.sigma / state.norms[f];
    let k_ff = kernel.inner(f, f);
    let a_f = state.weighted_inner[f];
    let numerator = c * (state.total_inner[f] - a_f) - state.cross + state.weighted_sq;
    let denominator = c * c * k_ff - 2.0 * c * a_f + state.weighted_sq;
    if !(denominator > 0.0) || !denominator.is_finite() {
        return Err(Error::ExactFit);
    }
    Ok((numerator / denominator).clamp(0.0, 1.0))
}

/// Runs up to `budget` Frank-Wolfe iterations, stopping early once the
/// residual is negligible relative to `‖L‖²`.
pub fn fw_construct<K: KernelProvider + ?Sized>(kernel: &K, budget: usize) -> Result<FwState> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be >= 1".into()));
    }
    let mut state = FwState::new(kernel)?;
    for _ in 0..budget {
        if state.residual_sq() <= EXACT_FIT_TOL * state.total_sq {
            break;
        }
        let Some(f) = state.select() else { break };
        let gamma = match fw_step_gamma(kernel, &state, f) {
            Ok(g) => g,
            Err(Error::ExactFit) => break,
            Err(e) => return Err(e),
        };
        state.apply_step(kernel, f, gamma)?;
        if gamma == 0.0 {
            break;
        }
    }
    Ok(state)
}

/// Query set obtained by binarizing Frank-Wolfe weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    /// Pool indices with positive weight, ascending.
    pub indices: Vec<usize>,
    /// The continuous weights, kept for diagnostics.
    pub weights: Vec<f64>,
}

impl Batch {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Projects the weights onto `{0, 1}`: every positive weight becomes a query.
pub fn binarize(state: &FwState) -> Batch {
    batch_from_weights(state.weights().to_vec())
}

fn batch_from_weights(weights: Vec<f64>) -> Batch {
    let indices = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(i, _)| i)
        .collect();
    Batch { indices, weights }
}

/// Frank-Wolfe over a projection, keeping the residual `L̂ − L̂(w)` as a
/// `J`-vector. Per iteration this costs `O(M·J)`; the `M × M` kernel is
/// never formed.
pub fn fw_construct_projected(proj: &ProjectionMatrix, budget: usize) -> Result<Batch> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be >= 1".into()));
    }
    let size = proj.pool_size();
    let mut norms: Vec<f64> = (0..size).map(|n| dot(proj.row(n), proj.row(n)).sqrt()).collect();
    let largest = norms.iter().copied().fold(0.0, f64::max);
    if !(largest > 0.0) {
        return Err(Error::EmptyPool);
    }
    for v in norms.iter_mut() {
        if *v <= DEGENERATE_NORM_TOL * largest {
            *v = 0.0;
        }
    }
    let sigma: f64 = norms.iter().sum();
    let total = proj.sum();
    let total_sq = dot(&total, &total);
    let mut weighted = vec![0.0; proj.dim()];
    let mut residual = total.clone();
    let mut weights = vec![0.0; size];

    for _ in 0..budget {
        if dot(&residual, &residual) <= EXACT_FIT_TOL * total_sq {
            break;
        }
        let best = (0..size)
            .into_par_iter()
            .filter(|&n| norms[n] > 0.0)
            .map(|n| (n, dot(&residual, proj.row(n)) / norms[n]))
            .reduce_with(|a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
        let Some((f, _)) = best else { break };
        let c = sigma / norms[f];
        let direction: Vec<f64> = proj.row(f).iter().zip(&weighted).map(|(l, w)| c * l - w).collect();
        let denominator = dot(&direction, &direction);
        if !(denominator > 0.0) {
            break;
        }
        let gamma = (dot(&direction, &residual) / denominator).clamp(0.0, 1.0);
        if gamma == 0.0 {
            break;
        }
        for ((w, l), (r, t)) in weighted
            .iter_mut()
            .zip(proj.row(f))
            .zip(residual.iter_mut().zip(&total))
        {
            *w = (1.0 - gamma) * *w + gamma * c * l;
            *r = t - *w;
        }
        for w in weights.iter_mut() {
            *w *= 1.0 - gamma;
        }
        weights[f] += gamma * c;
    }
    Ok(batch_from_weights(weights))
}

/// Random-projection batch construction: embeds the pool with `projections`
/// posterior samples drawn from `seed`, runs Frank-Wolfe on the embedding and
/// binarizes the weights.
pub fn acs_fw_projected(
    model: &Model,
    pool: &DMatrix<f64>,
    budget: usize,
    projections: usize,
    seed: u64,
) -> Result<Batch> {
    if projections == 0 {
        return Err(Error::InvalidArgument("number of projections must be >= 1".into()));
    }
    let proj = project(model, pool, projections, seed)?;
    fw_construct_projected(&proj, budget)
}
