//! Baseline batch-selection strategies and the common strategy interface.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coreset::{binarize, fw_construct, fw_construct_projected};
use crate::error::{Error, Result};
use crate::kernels::{fisher_kernel, project, KernelProvider};
use crate::models::{row_major, Model, ModelSpec};
use crate::special::{bernoulli_entropy, norm_cdf};

/// Monte Carlo settings for probit BALD.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaldSettings {
    pub samples: usize,
    pub seed: u64,
}

impl Default for BaldSettings {
    fn default() -> Self {
        BaldSettings {
            samples: 1000,
            seed: 0,
        }
    }
}

/// Predictive entropy: `½ log(2πe(σ₀² + xᵀΣx))` for regression, the
/// Bernoulli entropy of `Φ(ζ)` for probit.
pub fn score_maxent(model: &Model, x: &[f64]) -> Result<f64> {
    model.posterior().check_dim(x)?;
    Ok(maxent_unchecked(model, x))
}

fn maxent_unchecked(model: &Model, x: &[f64]) -> f64 {
    match model {
        Model::Linear(m) => {
            let v = m.noise_variance() + m.posterior().quad_form(x).max(0.0);
            0.5 * (2.0 * PI * E * v).ln()
        }
        Model::Probit(m) => bernoulli_entropy(norm_cdf(m.zeta(x))),
    }
}

/// BALD information gain. Linear regression uses the closed form
/// `½ log(1 + xᵀΣx / σ₀²)`; probit uses `S` posterior samples:
/// `H[mean_s p_s] − mean_s H[p_s]`, `p_s = Φ(θ_sᵀx)`.
pub fn score_bald(model: &Model, x: &[f64], settings: BaldSettings) -> Result<f64> {
    model.posterior().check_dim(x)?;
    let pool = DMatrix::from_row_slice(1, x.len(), x);
    Ok(bald_scores(model, &pool, settings)?[0])
}

/// BALD scores for every row of `pool`, sharing one posterior sample set.
pub fn bald_scores(model: &Model, pool: &DMatrix<f64>, settings: BaldSettings) -> Result<Vec<f64>> {
    check_pool(model, pool)?;
    let rows = row_major(pool);
    let d = model.dim();
    match model {
        Model::Linear(m) => Ok(rows
            .chunks(d)
            .map(|x| 0.5 * (m.posterior().quad_form(x).max(0.0) / m.noise_variance()).ln_1p())
            .collect()),
        Model::Probit(m) => {
            if settings.samples == 0 {
                return Err(Error::InvalidArgument("BALD needs at least one sample".into()));
            }
            let thetas = m.posterior().sample(settings.samples, settings.seed)?;
            let dots = pool * thetas.transpose();
            let s = settings.samples as f64;
            Ok((0..pool.nrows())
                .map(|n| {
                    let (mut mean_p, mut mean_h) = (0.0, 0.0);
                    for z in dots.row(n).iter() {
                        let p = norm_cdf(*z);
                        mean_p += p;
                        mean_h += bernoulli_entropy(p);
                    }
                    (bernoulli_entropy(mean_p / s) - mean_h / s).max(0.0)
                })
                .collect())
        }
    }
}

/// Predictive entropy for every row of `pool`.
pub fn maxent_scores(model: &Model, pool: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_pool(model, pool)?;
    let rows = row_major(pool);
    Ok(rows.chunks(model.dim()).map(|x| maxent_unchecked(model, x)).collect())
}

fn check_pool(model: &Model, pool: &DMatrix<f64>) -> Result<()> {
    if pool.ncols() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: pool.ncols(),
        });
    }
    Ok(())
}

/// Indices of the `b` largest scores in descending score order, lowest index
/// first among ties.
pub fn select_top_b(scores: &[f64], b: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]).then(i.cmp(&j)));
    order.truncate(b);
    order
}

/// `min(b, m)` distinct indices drawn uniformly without replacement.
pub fn select_random(m: usize, b: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rand::seq::index::sample(&mut rng, m, b.min(m)).into_vec()
}

/// How sequential-greedy selection labels each pick before refitting.
#[derive(Debug, Clone, Copy)]
pub enum GreedyMode<'a> {
    /// Reveal the true pool label (one oracle query per pick).
    Retrain(&'a [f64]),
    /// Use the model's own prediction: the predictive mean for regression,
    /// `1{p ≥ 0.5}` for probit. Imputed labels are discarded afterwards.
    Impute,
}

/// Picks `b` points one at a time by MaxEnt, refitting after each pick.
pub fn select_sequential_greedy(
    spec: &ModelSpec,
    labeled_x: &DMatrix<f64>,
    labeled_y: &[f64],
    pool: &DMatrix<f64>,
    b: usize,
    mode: GreedyMode<'_>,
) -> Result<Vec<usize>> {
    if b == 0 {
        return Err(Error::InvalidArgument("batch size must be >= 1".into()));
    }
    if let GreedyMode::Retrain(labels) = mode {
        if labels.len() != pool.nrows() {
            return Err(Error::DimensionMismatch {
                expected: pool.nrows(),
                found: labels.len(),
            });
        }
    }
    let mut xs = row_major(labeled_x);
    let mut ys = labeled_y.to_vec();
    let d = pool.ncols();
    let pool_rows = row_major(pool);
    let mut model = spec.fit(labeled_x, labeled_y)?;
    let mut picked: Vec<usize> = Vec::new();
    let mut taken = vec![false; pool.nrows()];
    for step in 0..b.min(pool.nrows()) {
        let mut scores = maxent_scores(&model, pool)?;
        for (s, &t) in scores.iter_mut().zip(&taken) {
            if t {
                *s = f64::NEG_INFINITY;
            }
        }
        let f = select_top_b(&scores, 1)[0];
        picked.push(f);
        taken[f] = true;
        if step + 1 == b.min(pool.nrows()) {
            break;
        }
        let x = &pool_rows[f * d..(f + 1) * d];
        let label = match mode {
            GreedyMode::Retrain(labels) => labels[f],
            GreedyMode::Impute => {
                let p = model.predict_point(x)?;
                match model {
                    Model::Linear(_) => p,
                    Model::Probit(_) => {
                        if p >= 0.5 {
                            1.0
                        } else {
                            0.0
                        }
                    }
                }
            }
        };
        xs.extend_from_slice(x);
        ys.push(label);
        let design = DMatrix::from_row_slice(ys.len(), d, &xs);
        model = spec.fit(&design, &ys)?;
    }
    Ok(picked)
}

/// Batch acquisition strategy selectable from configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Frank-Wolfe on the closed-form Fisher kernel.
    AcsFw,
    /// Frank-Wolfe on random projections of the weighted Euclidean inner product.
    AcsFwProjected,
    Random,
    MaxEnt,
    Bald,
    /// MaxEnt with a refit on the true label after every pick.
    MaxEntSg,
    /// MaxEnt with a refit on an imputed label after every pick.
    MaxEntI,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::AcsFw,
        Strategy::AcsFwProjected,
        Strategy::Random,
        Strategy::MaxEnt,
        Strategy::Bald,
        Strategy::MaxEntSg,
        Strategy::MaxEntI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::AcsFw => "acs-fw",
            Strategy::AcsFwProjected => "acs-fw-projected",
            Strategy::Random => "random",
            Strategy::MaxEnt => "maxent",
            Strategy::Bald => "bald",
            Strategy::MaxEntSg => "maxent-sg",
            Strategy::MaxEntI => "maxent-i",
        }
    }

    /// Whether batches always have the requested size.
    pub fn fixed_batch_size(self) -> bool {
        !matches!(self, Strategy::AcsFw | Strategy::AcsFwProjected)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown strategy `{s}`")))
    }
}

/// Inputs available to a strategy when it builds one batch.
#[derive(Debug, Clone, Copy)]
pub struct SelectionContext<'a> {
    /// Model fitted on the labeled data.
    pub model: &'a Model,
    pub spec: &'a ModelSpec,
    pub labeled_x: &'a DMatrix<f64>,
    pub labeled_y: &'a [f64],
    pub pool_x: &'a DMatrix<f64>,
    /// Oracle labels for the pool; only sequential retraining reads them.
    pub pool_y: Option<&'a [f64]>,
    pub projections: usize,
    pub bald: BaldSettings,
}

pub trait SelectionStrategy {
    /// Returns distinct pool indices, at most `budget` of them.
    fn select_batch(&self, ctx: &SelectionContext<'_>, budget: usize, seed: u64) -> Result<Vec<usize>>;
}

impl SelectionStrategy for Strategy {
    fn select_batch(&self, ctx: &SelectionContext<'_>, budget: usize, seed: u64) -> Result<Vec<usize>> {
        let size = ctx.pool_x.nrows();
        if size == 0 || budget == 0 {
            return Ok(Vec::new());
        }
        let b = budget.min(size);
        match self {
            Strategy::Random => Ok(select_random(size, b, seed)),
            Strategy::MaxEnt => Ok(select_top_b(&maxent_scores(ctx.model, ctx.pool_x)?, b)),
            Strategy::Bald => {
                let settings = BaldSettings {
                    seed,
                    ..ctx.bald
                };
                Ok(select_top_b(&bald_scores(ctx.model, ctx.pool_x, settings)?, b))
            }
            Strategy::MaxEntSg => {
                let labels = ctx.pool_y.ok_or_else(|| {
                    Error::InvalidArgument("maxent-sg needs oracle labels for the pool".into())
                })?;
                select_sequential_greedy(ctx.spec, ctx.labeled_x, ctx.labeled_y, ctx.pool_x, b, GreedyMode::Retrain(labels))
            }
            Strategy::MaxEntI => {
                select_sequential_greedy(ctx.spec, ctx.labeled_x, ctx.labeled_y, ctx.pool_x, b, GreedyMode::Impute)
            }
            Strategy::AcsFw => {
                let kernel = fisher_kernel(ctx.model, ctx.pool_x)?;
                let indices = match fw_construct(&kernel, b) {
                    Ok(state) => binarize(&state).indices,
                    Err(Error::EmptyPool) => Vec::new(),
                    Err(e) => return Err(e),
                };
                Ok(non_empty(indices, |n| kernel.norm(n), size))
            }
            Strategy::AcsFwProjected => {
                let proj = project(ctx.model, ctx.pool_x, ctx.projections, seed)?;
                let indices = match fw_construct_projected(&proj, b) {
                    Ok(batch) => batch.indices,
                    Err(Error::EmptyPool) => Vec::new(),
                    Err(e) => return Err(e),
                };
                Ok(non_empty(indices, |n| proj.norm(n), size))
            }
        }
    }
}

// An empty Frank-Wolfe batch falls back to the single largest-norm point.
fn non_empty(indices: Vec<usize>, norm: impl Fn(usize) -> f64, size: usize) -> Vec<usize> {
    if !indices.is_empty() {
        return indices;
    }
    let norms: Vec<f64> = (0..size).map(norm).collect();
    select_top_b(&norms, 1)
}
