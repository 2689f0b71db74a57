//! Inner products between the per-point log-likelihood vectors `L_n`.
//!
//! Two families are provided:
//!
//! * closed-form weighted Fisher inner products for linear and probit
//!   regression, materialized into a [`DenseKernel`];
//! * the weighted Euclidean inner product estimated from `J` posterior
//!   samples, held as a [`ProjectionMatrix`] whose rows are the embeddings
//!   `L̂_n = J^{-1/2} [L_n(θ_1), …, L_n(θ_J)]`.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{row_major, LinRegModel, Model, ProbitModel};
use crate::special::{bvn_cdf_unchecked, norm_cdf, owens_t_unchecked};

/// Source of pairwise inner products `⟨L_n, L_m⟩` over a pool.
pub trait KernelProvider: Sync {
    fn pool_size(&self) -> usize;

    fn inner(&self, n: usize, m: usize) -> f64;

    /// `σ_n = ‖L_n‖`
    fn norm(&self, n: usize) -> f64 {
        self.inner(n, n).max(0.0).sqrt()
    }

    /// Writes `⟨L_m, L_n⟩` for every `m` into `out`.
    fn column(&self, n: usize, out: &mut [f64]) {
        for (m, slot) in out.iter_mut().enumerate() {
            *slot = self.inner(m, n);
        }
    }

    /// `⟨L, L_n⟩` for every `n`, where `L = Σ_m L_m`.
    fn total_inner(&self) -> Vec<f64> {
        let size = self.pool_size();
        (0..size)
            .into_par_iter()
            .map(|n| (0..size).map(|m| self.inner(m, n)).sum())
            .collect()
    }
}

/// Explicit symmetric `M × M` kernel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseKernel {
    matrix: DMatrix<f64>,
}

impl DenseKernel {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        for c in 0..matrix.ncols() {
            for r in 0..matrix.nrows() {
                if !matrix[(r, c)].is_finite() {
                    return Err(Error::NonFiniteKernel { row: r, col: c });
                }
            }
        }
        let scale = matrix.amax().max(f64::MIN_POSITIVE);
        if (&matrix - matrix.transpose()).amax() > 1e-12 * scale {
            return Err(Error::InvalidArgument("kernel matrix is not symmetric".into()));
        }
        Ok(DenseKernel { matrix })
    }

    /// Gram matrix `V Vᵀ` of the rows of `vectors`.
    pub fn gram(vectors: &DMatrix<f64>) -> Result<Self> {
        let rows = row_major(vectors);
        let width = vectors.ncols();
        let size = vectors.nrows();
        let mut k = DMatrix::zeros(size, size);
        for n in 0..size {
            for m in 0..=n {
                let v = dot(&rows[n * width..(n + 1) * width], &rows[m * width..(m + 1) * width]);
                k[(n, m)] = v;
                k[(m, n)] = v;
            }
        }
        DenseKernel::new(k)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

impl KernelProvider for DenseKernel {
    fn pool_size(&self) -> usize {
        self.matrix.nrows()
    }

    fn inner(&self, n: usize, m: usize) -> f64 {
        self.matrix[(n, m)]
    }

    fn column(&self, n: usize, out: &mut [f64]) {
        out.copy_from_slice(self.matrix.column(n).as_slice());
    }

    fn total_inner(&self) -> Vec<f64> {
        (0..self.pool_size())
            .map(|n| self.matrix.column(n).iter().sum())
            .collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_pair(dim: usize, xn: &[f64], xm: &[f64]) -> Result<()> {
    for x in [xn, xm] {
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.len(),
            });
        }
    }
    Ok(())
}

/// `⟨L_n, L_m⟩ = (x_nᵀx_m / σ₀⁴) · x_nᵀΣx_m`
pub fn fisher_linreg_inner(model: &LinRegModel, xn: &[f64], xm: &[f64]) -> Result<f64> {
    check_pair(model.posterior().dim(), xn, xm)?;
    Ok(linreg_inner(model, xn, xm))
}

fn linreg_inner(model: &LinRegModel, xn: &[f64], xm: &[f64]) -> f64 {
    let s2 = model.noise_variance();
    dot(xn, xm) / (s2 * s2) * model.posterior().bilinear(xn, xm)
}

/// `⟨L_n, L_m⟩ = x_nᵀx_m (BvN(ζ_n, ζ_m, ρ_nm) − Φ(ζ_n)Φ(ζ_m))`
pub fn fisher_probit_inner(model: &ProbitModel, xn: &[f64], xm: &[f64]) -> Result<f64> {
    check_pair(model.posterior().dim(), xn, xm)?;
    Ok(probit_inner(model, xn, xm))
}

fn probit_inner(model: &ProbitModel, xn: &[f64], xm: &[f64]) -> f64 {
    let xx = dot(xn, xm);
    if xx == 0.0 {
        return 0.0;
    }
    let post = model.posterior();
    let vn = 1.0 + post.quad_form(xn).max(0.0);
    let vm = 1.0 + post.quad_form(xm).max(0.0);
    let zn = post.mean_dot(xn) / vn.sqrt();
    let zm = post.mean_dot(xm) / vm.sqrt();
    let rho = (post.bilinear(xn, xm) / (vn * vm).sqrt()).clamp(-1.0, 1.0);
    xx * (bvn_cdf_unchecked(zn, zm, rho) - norm_cdf(zn) * norm_cdf(zm))
}

/// `‖L_n‖² = x_nᵀx_n (Φ(ζ_n)(1 − Φ(ζ_n)) − 2 T(ζ_n, 1/√(1 + 2x_nᵀΣx_n)))`
pub fn fisher_probit_norm_sq(model: &ProbitModel, xn: &[f64]) -> Result<f64> {
    check_pair(model.posterior().dim(), xn, xn)?;
    Ok(probit_norm_sq(model, xn))
}

fn probit_norm_sq(model: &ProbitModel, xn: &[f64]) -> f64 {
    let xx = dot(xn, xn);
    if xx == 0.0 {
        return 0.0;
    }
    let post = model.posterior();
    let s = post.quad_form(xn).max(0.0);
    let zeta = post.mean_dot(xn) / (1.0 + s).sqrt();
    let p = norm_cdf(zeta);
    let v = xx * (p * (1.0 - p) - 2.0 * owens_t_unchecked(zeta, 1.0 / (1.0 + 2.0 * s).sqrt()));
    if (-1e-12..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// Closed-form weighted Fisher inner product for either model.
pub fn fisher_inner(model: &Model, xn: &[f64], xm: &[f64]) -> Result<f64> {
    match model {
        Model::Linear(m) => fisher_linreg_inner(m, xn, xm),
        Model::Probit(m) => fisher_probit_inner(m, xn, xm),
    }
}

/// Squared Fisher norm `⟨L_n, L_n⟩`; for probit this uses the Owen's T form.
pub fn fisher_norm_sq(model: &Model, xn: &[f64]) -> Result<f64> {
    match model {
        Model::Linear(m) => fisher_linreg_inner(m, xn, xn),
        Model::Probit(m) => fisher_probit_norm_sq(m, xn),
    }
}

/// Greedy score `α_ACS(x) = ‖L_x‖²` under the Fisher inner product. Only
/// used for diagnostics; batches are built by Frank-Wolfe.
pub fn acquisition_score_acs(model: &Model, x: &[f64]) -> Result<f64> {
    fisher_norm_sq(model, x)
}

/// Materializes the closed-form Fisher kernel over the rows of `pool`.
/// Off-diagonal entries are computed in parallel; each entry is independent,
/// so the result does not depend on the schedule.
pub fn fisher_kernel(model: &Model, pool: &DMatrix<f64>) -> Result<DenseKernel> {
    let d = model.dim();
    if pool.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: pool.ncols(),
        });
    }
    let size = pool.nrows();
    let rows = row_major(pool);
    // Σ x_m for every m, row-major
    let cov_rows = row_major(&(pool * model.posterior().covariance()));
    let point = |i: usize| &rows[i * d..(i + 1) * d];
    let cov_point = |i: usize| &cov_rows[i * d..(i + 1) * d];
    let lower: Vec<Vec<f64>> = match model {
        Model::Linear(lm) => {
            let s2 = lm.noise_variance();
            let scale = 1.0 / (s2 * s2);
            (0..size)
                .into_par_iter()
                .map(|n| {
                    (0..=n)
                        .map(|m| scale * dot(point(n), point(m)) * dot(point(n), cov_point(m)))
                        .collect()
                })
                .collect()
        }
        Model::Probit(pm) => {
            // (ζ_i, √(1 + x_iᵀΣx_i)) per point
            let stats: Vec<(f64, f64)> = (0..size)
                .map(|i| {
                    let v = (1.0 + dot(point(i), cov_point(i)).max(0.0)).sqrt();
                    (pm.posterior().mean_dot(point(i)) / v, v)
                })
                .collect();
            (0..size)
                .into_par_iter()
                .map(|n| {
                    (0..=n)
                        .map(|m| {
                            if n == m {
                                return probit_norm_sq(pm, point(n));
                            }
                            let xx = dot(point(n), point(m));
                            if xx == 0.0 {
                                return 0.0;
                            }
                            let (zn, vn) = stats[n];
                            let (zm, vm) = stats[m];
                            let rho = (dot(point(n), cov_point(m)) / (vn * vm)).clamp(-1.0, 1.0);
                            xx * (bvn_cdf_unchecked(zn, zm, rho) - norm_cdf(zn) * norm_cdf(zm))
                        })
                        .collect()
                })
                .collect()
        }
    };
    let mut k = DMatrix::zeros(size, size);
    for (n, row) in lower.iter().enumerate() {
        for (m, &v) in row.iter().enumerate() {
            k[(n, m)] = v;
            k[(m, n)] = v;
        }
    }
    DenseKernel::new(k)
}

/// Random feature embedding of the pool: row `n` is `L̂_n ∈ R^J`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl ProjectionMatrix {
    /// Wraps an explicit `M × J` matrix of embeddings.
    pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("projection has non-finite entries".into()));
        }
        Ok(ProjectionMatrix {
            rows: m.nrows(),
            cols: m.ncols(),
            values: row_major(m),
        })
    }

    pub fn pool_size(&self) -> usize {
        self.rows
    }

    /// Number of projections `J`.
    pub fn dim(&self) -> usize {
        self.cols
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.values[n * self.cols..(n + 1) * self.cols]
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.values)
    }

    /// `Σ_n L̂_n`
    pub fn sum(&self) -> Vec<f64> {
        let mut total = vec![0.0; self.cols];
        for n in 0..self.rows {
            for (t, v) in total.iter_mut().zip(self.row(n)) {
                *t += v;
            }
        }
        total
    }
}

impl KernelProvider for ProjectionMatrix {
    fn pool_size(&self) -> usize {
        self.rows
    }

    fn inner(&self, n: usize, m: usize) -> f64 {
        dot(self.row(n), self.row(m))
    }

    fn column(&self, n: usize, out: &mut [f64]) {
        let target = self.row(n);
        for (m, slot) in out.iter_mut().enumerate() {
            *slot = dot(self.row(m), target);
        }
    }

    fn total_inner(&self) -> Vec<f64> {
        let total = self.sum();
        (0..self.rows).map(|n| dot(&total, self.row(n))).collect()
    }
}

/// Builds `L̂_n = J^{-1/2} [L_n(θ_1), …, L_n(θ_J)]` for every pool row, using
/// one shared set of `J` posterior samples drawn with `seed`.
pub fn project(model: &Model, pool: &DMatrix<f64>, projections: usize, seed: u64) -> Result<ProjectionMatrix> {
    let d = model.dim();
    if pool.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: pool.ncols(),
        });
    }
    if pool.nrows() == 0 {
        return Err(Error::InvalidArgument("pool must contain at least one point".into()));
    }
    if pool.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("pool has non-finite entries".into()));
    }
    let thetas = row_major(&model.posterior().sample(projections, seed)?);
    let rows = row_major(pool);
    let scale = 1.0 / (projections as f64).sqrt();
    let values: Vec<f64> = rows
        .par_chunks(d)
        .flat_map_iter(|x| {
            let summary = model.summary(x);
            thetas.chunks(d).map(move |theta| scale * summary.loglik(dot(x, theta)))
        })
        .collect();
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteKernel {
            row: pos / projections,
            col: pos % projections,
        });
    }
    Ok(ProjectionMatrix {
        rows: pool.nrows(),
        cols: projections,
        values,
    })
}

/// `L̂_nᵀ L̂_m`, the sample estimate of the weighted Euclidean inner product.
pub fn euclidean_inner(proj: &ProjectionMatrix, n: usize, m: usize) -> Result<f64> {
    for index in [n, m] {
        if index >= proj.rows {
            return Err(Error::IndexOutOfRange {
                index,
                len: proj.rows,
            });
        }
    }
    Ok(proj.inner(n, m))
}
