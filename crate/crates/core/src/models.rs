//! Bayesian models with Gaussian parameter posteriors.
//!
//! Two models are provided: conjugate linear regression with known noise
//! variance, and probit regression with a Laplace approximation. Both expose
//! the per-point expected log-likelihood term
//! `L_m(θ) = E_{y_m}[log p(y_m | x_m, θ)] + H[y_m | x_m, D₀]`
//! that batch construction approximates.

use nalgebra::{DMatrix, DVector, DVectorView};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::special::{inv_mills, log_norm_cdf, norm_cdf, Probability};

const PSD_SLACK: f64 = 1e-10;
const PROBIT_MAX_ITER: usize = 100;
const PROBIT_GRAD_TOL: f64 = 1e-8;

/// Gaussian distribution over model weights, `N(μ_θ, Σ_θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPosterior {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
}

impl GaussianPosterior {
    /// Validates shape, symmetry and positive semi-definiteness. The stored
    /// covariance is the symmetrized input.
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let d = mean.len();
        if d == 0 {
            return Err(Error::InvalidArgument("posterior dimension must be >= 1".into()));
        }
        if covariance.nrows() != d || covariance.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: covariance.nrows(),
            });
        }
        if mean.iter().chain(covariance.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("posterior has non-finite entries".into()));
        }
        let scale = covariance.amax().max(1.0);
        let asym = (&covariance - covariance.transpose()).amax();
        if asym > 1e-9 * scale {
            return Err(Error::InvalidArgument(format!(
                "covariance is not symmetric (max asymmetry {asym:e})"
            )));
        }
        let covariance = (&covariance + covariance.transpose()) * 0.5;
        check_psd(&covariance)?;
        Ok(GaussianPosterior { mean, covariance })
    }

    /// Zero mean, `variance · I`.
    pub fn isotropic(dim: usize, variance: f64) -> Result<Self> {
        Self::new(DVector::zeros(dim), DMatrix::identity(dim, dim) * variance)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    /// `μᵀx`
    pub fn mean_dot(&self, x: &[f64]) -> f64 {
        x.iter().zip(self.mean.iter()).map(|(a, b)| a * b).sum()
    }

    /// `xᵀΣy`
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        view(x).dot(&(&self.covariance * view(y)))
    }

    /// `xᵀΣx`
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    pub(crate) fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if let Some(v) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { name: "x", value: *v });
        }
        Ok(())
    }

    /// `count` i.i.d. draws as the rows of a `count × d` matrix.
    ///
    /// Uses a Cholesky factor when the covariance is positive definite and
    /// falls back to a clipped eigendecomposition otherwise.
    pub fn sample(&self, count: usize, seed: u64) -> Result<DMatrix<f64>> {
        if count == 0 {
            return Err(Error::InvalidArgument("sample count must be >= 1".into()));
        }
        let factor = self.sqrt_factor()?;
        let d = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = DMatrix::zeros(count, d);
        let mut z = DVector::zeros(d);
        for j in 0..count {
            for zi in z.iter_mut() {
                *zi = StandardNormal.sample(&mut rng);
            }
            let theta = &self.mean + &factor * &z;
            out.row_mut(j).copy_from(&theta.transpose());
        }
        Ok(out)
    }

    fn sqrt_factor(&self) -> Result<DMatrix<f64>> {
        if let Some(chol) = self.covariance.clone().cholesky() {
            return Ok(chol.l());
        }
        let eig = self.covariance.clone().symmetric_eigen();
        let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
        Ok(&eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals))
    }
}

fn check_psd(cov: &DMatrix<f64>) -> Result<()> {
    if cov.nrows() == 0 {
        return Ok(());
    }
    let eig = cov.clone().symmetric_eigen();
    let min = eig.eigenvalues.min();
    let trace = cov.trace().abs();
    if min < -PSD_SLACK * trace || (trace == 0.0 && min < 0.0) {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    Ok(())
}

pub(crate) fn view(x: &[f64]) -> DVectorView<'_, f64> {
    DVectorView::from_slice(x, x.len())
}

/// Copies the rows of an `N × d` matrix into a contiguous row-major buffer.
pub(crate) fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

fn check_design(x: &DMatrix<f64>, targets: usize) -> Result<()> {
    if x.ncols() == 0 {
        return Err(Error::InvalidArgument("input dimension must be >= 1".into()));
    }
    if x.nrows() != targets {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            found: targets,
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("design matrix has non-finite entries".into()));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
    }
}

/// Predictive distribution of a regression target, `N(mean, variance)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictiveGaussian {
    pub mean: f64,
    pub variance: f64,
}

/// Predictive distribution of a binary label, `Ber(prob)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictiveBernoulli {
    pub prob: Probability,
}

/// Bayesian linear regression `y = θᵀx + ε`, `ε ~ N(0, σ₀²)`, with prior
/// `θ ~ N(0, prior_variance · I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinRegModel {
    posterior: GaussianPosterior,
    noise_variance: f64,
    prior_variance: f64,
}

impl LinRegModel {
    /// Conjugate posterior: `μ = (XᵀX + σ₀²/τ I)⁻¹ Xᵀy`, `Σ = σ₀² (XᵀX + σ₀²/τ I)⁻¹`.
    pub fn fit(
        x: &DMatrix<f64>,
        y: &[f64],
        noise_variance: f64,
        prior_variance: f64,
    ) -> Result<Self> {
        check_positive("noise variance", noise_variance)?;
        check_positive("prior variance", prior_variance)?;
        check_design(x, y.len())?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("targets have non-finite entries".into()));
        }
        let d = x.ncols();
        let ridge = noise_variance / prior_variance;
        let mut a = x.transpose() * x;
        for i in 0..d {
            a[(i, i)] += ridge;
        }
        let chol = a.cholesky().ok_or(Error::IllConditioned)?;
        let xty = x.transpose() * view(y);
        let mean = chol.solve(&xty);
        let inv = chol.inverse();
        let covariance = (&inv + inv.transpose()) * (0.5 * noise_variance);
        Ok(LinRegModel {
            posterior: GaussianPosterior::new(mean, covariance)?,
            noise_variance,
            prior_variance,
        })
    }

    /// Builds a model from an explicit posterior.
    pub fn from_posterior(
        posterior: GaussianPosterior,
        noise_variance: f64,
        prior_variance: f64,
    ) -> Result<Self> {
        check_positive("noise variance", noise_variance)?;
        check_positive("prior variance", prior_variance)?;
        Ok(LinRegModel {
            posterior,
            noise_variance,
            prior_variance,
        })
    }

    pub fn posterior(&self) -> &GaussianPosterior {
        &self.posterior
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn prior_variance(&self) -> f64 {
        self.prior_variance
    }

    pub fn predict(&self, x: &[f64]) -> Result<PredictiveGaussian> {
        self.posterior.check_dim(x)?;
        Ok(self.predict_unchecked(x))
    }

    fn predict_unchecked(&self, x: &[f64]) -> PredictiveGaussian {
        PredictiveGaussian {
            mean: self.posterior.mean_dot(x),
            variance: self.noise_variance + self.posterior.quad_form(x).max(0.0),
        }
    }
}

/// Probit regression `p(y = 1 | x, θ) = Φ(θᵀx)` with a Gaussian
/// (Laplace) approximation to the posterior.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbitModel {
    posterior: GaussianPosterior,
    prior_variance: f64,
}

impl ProbitModel {
    /// Laplace approximation: damped Newton to the MAP of the log joint, with
    /// the covariance set to the inverse Hessian of the negative log joint.
    pub fn fit(x: &DMatrix<f64>, y: &[f64], prior_variance: f64) -> Result<Self> {
        check_positive("prior variance", prior_variance)?;
        check_design(x, y.len())?;
        if let Some(bad) = y.iter().find(|&&v| v != 0.0 && v != 1.0) {
            return Err(Error::InvalidArgument(format!(
                "probit labels must be 0 or 1, got {bad}"
            )));
        }
        let d = x.ncols();
        let signs: Vec<f64> = y.iter().map(|&v| 2.0 * v - 1.0).collect();
        let objective = |theta: &DVector<f64>| -> f64 {
            let z = x * theta;
            let nll: f64 = z
                .iter()
                .zip(&signs)
                .map(|(zi, s)| -log_norm_cdf(s * zi))
                .sum();
            nll + theta.norm_squared() / (2.0 * prior_variance)
        };
        let derivatives = |theta: &DVector<f64>| -> (DVector<f64>, DMatrix<f64>) {
            let z = x * theta;
            let mut grad = theta / prior_variance;
            let mut hess = DMatrix::identity(d, d) / prior_variance;
            for (i, s) in signs.iter().enumerate() {
                let sz = s * z[i];
                let lambda = inv_mills(sz);
                let row = x.row(i);
                grad.axpy(-lambda * s, &row.transpose(), 1.0);
                let w = lambda * (sz + lambda);
                hess.ger(w, &row.transpose(), &row.transpose(), 1.0);
            }
            (grad, hess)
        };

        let mut theta = DVector::zeros(d);
        let mut f = objective(&theta);
        let mut grad_norm = f64::INFINITY;
        let mut converged = false;
        for _ in 0..PROBIT_MAX_ITER {
            let (grad, hess) = derivatives(&theta);
            grad_norm = grad.norm();
            if grad_norm <= PROBIT_GRAD_TOL {
                converged = true;
                break;
            }
            let chol = hess.cholesky().ok_or(Error::IllConditioned)?;
            let step = chol.solve(&grad);
            let slope = grad.dot(&step);
            let mut t = 1.0;
            loop {
                let candidate = &theta - &step * t;
                let fc = objective(&candidate);
                if fc <= f - 1e-4 * t * slope + 1e-14 * f.abs() || t < 1e-10 {
                    theta = candidate;
                    f = fc;
                    break;
                }
                t *= 0.5;
            }
        }
        if !converged {
            let (grad, _) = derivatives(&theta);
            grad_norm = grad.norm();
            if grad_norm > PROBIT_GRAD_TOL {
                return Err(Error::NotConverged {
                    iterations: PROBIT_MAX_ITER,
                    grad_norm,
                });
            }
        }
        log::trace!("probit fit converged, gradient norm {grad_norm:e}");
        let (_, hess) = derivatives(&theta);
        let inv = hess.cholesky().ok_or(Error::IllConditioned)?.inverse();
        let covariance = (&inv + inv.transpose()) * 0.5;
        Ok(ProbitModel {
            posterior: GaussianPosterior::new(theta, covariance)?,
            prior_variance,
        })
    }

    pub fn from_posterior(posterior: GaussianPosterior, prior_variance: f64) -> Result<Self> {
        check_positive("prior variance", prior_variance)?;
        Ok(ProbitModel {
            posterior,
            prior_variance,
        })
    }

    pub fn posterior(&self) -> &GaussianPosterior {
        &self.posterior
    }

    pub fn prior_variance(&self) -> f64 {
        self.prior_variance
    }

    /// `ζ = μᵀx / √(1 + xᵀΣx)`
    pub fn zeta(&self, x: &[f64]) -> f64 {
        self.posterior.mean_dot(x) / (1.0 + self.posterior.quad_form(x).max(0.0)).sqrt()
    }

    /// `Ber(Φ(ζ))`, exact for the probit likelihood under a Gaussian posterior.
    pub fn predict(&self, x: &[f64]) -> Result<PredictiveBernoulli> {
        self.posterior.check_dim(x)?;
        Ok(PredictiveBernoulli {
            prob: Probability::saturating(norm_cdf(self.zeta(x))),
        })
    }

    /// Log joint `Σ log p(y|x,θ) + log N(θ; 0, τI)` up to a constant.
    pub fn log_joint(x: &DMatrix<f64>, y: &[f64], prior_variance: f64, theta: &[f64]) -> f64 {
        let z = x * view(theta);
        let ll: f64 = z
            .iter()
            .zip(y)
            .map(|(zi, yi)| log_norm_cdf((2.0 * yi - 1.0) * zi))
            .sum();
        ll - view(theta).norm_squared() / (2.0 * prior_variance)
    }
}

/// Which likelihood a [`Model`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Task {
    Regression,
    Probit,
}

impl std::str::FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regression" => Ok(Task::Regression),
            "probit" => Ok(Task::Probit),
            _ => Err(Error::InvalidArgument(format!("unknown task `{s}`"))),
        }
    }
}

/// Everything needed to fit a [`Model`] from labeled data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub task: Task,
    /// Known observation noise `σ₀²` (regression only).
    pub noise_variance: f64,
    pub prior_variance: f64,
}

impl ModelSpec {
    pub fn fit(&self, x: &DMatrix<f64>, y: &[f64]) -> Result<Model> {
        Model::fit(self.task, x, y, self.noise_variance, self.prior_variance)
    }
}

/// A fitted model of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Linear(LinRegModel),
    Probit(ProbitModel),
}

impl From<LinRegModel> for Model {
    fn from(m: LinRegModel) -> Self {
        Model::Linear(m)
    }
}

impl From<ProbitModel> for Model {
    fn from(m: ProbitModel) -> Self {
        Model::Probit(m)
    }
}

/// Per-point quantities that do not depend on θ.
#[derive(Debug, Clone, Copy)]
pub(crate) enum PointSummary {
    Linear { mean: f64, constant: f64, inv_two_noise: f64 },
    Probit { prob: f64, prob_neg: f64, log_prob: f64, log_prob_neg: f64 },
}

impl PointSummary {
    /// `L(θ)` given `θᵀx`.
    pub(crate) fn loglik(&self, theta_dot_x: f64) -> f64 {
        match *self {
            PointSummary::Linear {
                mean,
                constant,
                inv_two_noise,
            } => {
                let r = mean - theta_dot_x;
                constant - r * r * inv_two_noise
            }
            PointSummary::Probit {
                prob,
                prob_neg,
                log_prob,
                log_prob_neg,
            } => {
                // p·log(Φ(t)/p) + (1 − p)·log(Φ(−t)/(1 − p)), exactly 0 at t = ζ
                let mut v = 0.0;
                if prob > 0.0 {
                    v += prob * (log_norm_cdf(theta_dot_x) - log_prob);
                }
                if prob_neg > 0.0 {
                    v += prob_neg * (log_norm_cdf(-theta_dot_x) - log_prob_neg);
                }
                v
            }
        }
    }
}

impl Model {
    /// Fits the model for `task` on the labeled data.
    pub fn fit(
        task: Task,
        x: &DMatrix<f64>,
        y: &[f64],
        noise_variance: f64,
        prior_variance: f64,
    ) -> Result<Self> {
        match task {
            Task::Regression => LinRegModel::fit(x, y, noise_variance, prior_variance).map(Model::Linear),
            Task::Probit => ProbitModel::fit(x, y, prior_variance).map(Model::Probit),
        }
    }

    pub fn task(&self) -> Task {
        match self {
            Model::Linear(_) => Task::Regression,
            Model::Probit(_) => Task::Probit,
        }
    }

    pub fn posterior(&self) -> &GaussianPosterior {
        match self {
            Model::Linear(m) => m.posterior(),
            Model::Probit(m) => m.posterior(),
        }
    }

    pub fn dim(&self) -> usize {
        self.posterior().dim()
    }

    /// Point prediction: predictive mean for regression, `P(y = 1)` for probit.
    pub fn predict_point(&self, x: &[f64]) -> Result<f64> {
        match self {
            Model::Linear(m) => m.predict(x).map(|p| p.mean),
            Model::Probit(m) => m.predict(x).map(|p| p.prob.value()),
        }
    }

    pub(crate) fn summary(&self, x: &[f64]) -> PointSummary {
        match self {
            Model::Linear(m) => {
                let pred = m.predict_unchecked(x);
                let noise = m.noise_variance;
                // −½log(2πσ₀²) − s²/(2σ₀²) + ½log(2πe s²) with q = (s² − σ₀²)/σ₀²
                let q = (pred.variance - noise) / noise;
                let constant = 0.5 * (q.ln_1p() - q);
                PointSummary::Linear {
                    mean: pred.mean,
                    constant,
                    inv_two_noise: 0.5 / noise,
                }
            }
            Model::Probit(m) => {
                let zeta = m.zeta(x);
                PointSummary::Probit {
                    prob: norm_cdf(zeta),
                    prob_neg: norm_cdf(-zeta),
                    log_prob: log_norm_cdf(zeta),
                    log_prob_neg: log_norm_cdf(-zeta),
                }
            }
        }
    }

    /// `L(θ) = E_{y ~ predictive}[log p(y | x, θ)] + H[y | x, D₀]`.
    pub fn expected_loglik_term(&self, x: &[f64], theta: &[f64]) -> Result<f64> {
        let post = self.posterior();
        post.check_dim(x)?;
        if theta.len() != post.dim() {
            return Err(Error::DimensionMismatch {
                expected: post.dim(),
                found: theta.len(),
            });
        }
        if let Some(v) = theta.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { name: "theta", value: *v });
        }
        Ok(self.summary(x).loglik(view(theta).dot(&view(x))))
    }
}

/// `count` draws from the model's parameter posterior, one per row.
pub fn sample_posterior(model: &Model, count: usize, seed: u64) -> Result<DMatrix<f64>> {
    model.posterior().sample(count, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn linreg_empty_recovers_prior() {
        let x = DMatrix::zeros(0, 2);
        let m = LinRegModel::fit(&x, &[], 1.0, 1.0).unwrap();
        assert_eq!(m.posterior().mean(), &DVector::zeros(2));
        assert_eq!(m.posterior().covariance(), &DMatrix::identity(2, 2));
        let m = LinRegModel::fit(&x, &[], 0.3, 2.5).unwrap();
        assert!((m.posterior().covariance() - DMatrix::identity(2, 2) * 2.5).amax() < 1e-15);
    }

    #[test]
    fn linreg_single_point_by_hand() {
        let x = dmatrix![1.0, 0.0];
        let m = LinRegModel::fit(&x, &[1.0], 1.0, 1.0).unwrap();
        let mean = m.posterior().mean();
        assert!((mean[0] - 0.5).abs() < 1e-15 && mean[1].abs() < 1e-15);
        let cov = m.posterior().covariance();
        assert!((cov - DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 1.0]))).amax() < 1e-15);
    }

    #[test]
    fn linreg_refit_is_bitwise_identical() {
        let x = dmatrix![1.0, 2.0; -0.5, 0.3; 2.0, 1.0];
        let y = [0.1, -0.2, 0.7];
        let a = LinRegModel::fit(&x, &y, 0.4, 1.0).unwrap();
        let b = LinRegModel::fit(&x, &y, 0.4, 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn linreg_rejects_bad_inputs() {
        let x = dmatrix![1.0, 0.0];
        assert!(LinRegModel::fit(&x, &[1.0], 0.0, 1.0).is_err());
        assert!(LinRegModel::fit(&x, &[1.0, 2.0], 1.0, 1.0).is_err());
        let m = LinRegModel::fit(&x, &[1.0], 1.0, 1.0).unwrap();
        assert!(matches!(m.predict(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn linreg_predict_prior_cases() {
        let m = LinRegModel::fit(&DMatrix::zeros(0, 2), &[], 1.0, 1.0).unwrap();
        let p = m.predict(&[1.0, 0.0]).unwrap();
        assert_eq!((p.mean, p.variance), (0.0, 2.0));
        let p = m.predict(&[0.0, 0.0]).unwrap();
        assert_eq!((p.mean, p.variance), (0.0, 1.0));
    }

    #[test]
    fn probit_empty_recovers_prior() {
        let m = ProbitModel::fit(&DMatrix::zeros(0, 3), &[], 2.0).unwrap();
        assert_eq!(m.posterior().mean(), &DVector::zeros(3));
        assert!((m.posterior().covariance() - DMatrix::identity(3, 3) * 2.0).amax() < 1e-15);
    }

    #[test]
    fn probit_symmetric_data_has_zero_orthogonal_component() {
        // (x, 1) and (−x, 0) along e₁, mirrored in the second coordinate
        let x = dmatrix![1.0, 0.5; -1.0, -0.5; 1.0, -0.5; -1.0, 0.5];
        let y = [1.0, 0.0, 1.0, 0.0];
        let m = ProbitModel::fit(&x, &y, 1.0).unwrap();
        assert!(m.posterior().mean()[0] > 0.0);
        assert!(m.posterior().mean()[1].abs() < 1e-12);
    }

    #[test]
    fn probit_rejects_non_binary_labels() {
        let x = dmatrix![1.0];
        assert!(ProbitModel::fit(&x, &[0.5], 1.0).is_err());
    }

    #[test]
    fn probit_predict_symmetric_cases() {
        let m = ProbitModel::fit(&DMatrix::zeros(0, 2), &[], 1.0).unwrap();
        assert_eq!(m.predict(&[0.3, -2.0]).unwrap().prob.value(), 0.5);
        let x = dmatrix![1.0, 0.2; 0.4, 1.0; -0.3, 0.8];
        let m = ProbitModel::fit(&x, &[1.0, 0.0, 1.0], 1.0).unwrap();
        assert_eq!(m.predict(&[0.0, 0.0]).unwrap().prob.value(), 0.5);
    }

    #[test]
    fn expected_loglik_entropy_cancellation() {
        // regression: θᵀx = predictive mean and s² = σ₀² (x = 0)
        let lin = Model::from(LinRegModel::fit(&DMatrix::zeros(0, 2), &[], 1.0, 1.0).unwrap());
        let v = lin.expected_loglik_term(&[0.0, 0.0], &[0.4, -0.1]).unwrap();
        assert!(v.abs() < 1e-15, "{v}");
        // probit: p = 0.5 and Φ(θᵀx) = 0.5
        let pr = Model::from(ProbitModel::fit(&DMatrix::zeros(0, 2), &[], 1.0).unwrap());
        let v = pr.expected_loglik_term(&[1.0, 1.0], &[0.5, -0.5]).unwrap();
        assert!(v.abs() < 1e-15, "{v}");
    }

    #[test]
    fn expected_loglik_errors() {
        let lin = Model::from(LinRegModel::fit(&DMatrix::zeros(0, 2), &[], 1.0, 1.0).unwrap());
        assert!(lin.expected_loglik_term(&[1.0], &[0.0, 0.0]).is_err());
        assert!(lin.expected_loglik_term(&[1.0, 0.0], &[0.0]).is_err());
        assert!(lin.expected_loglik_term(&[1.0, 0.0], &[f64::NAN, 0.0]).is_err());
        // extreme logits stay finite
        let pr = Model::from(
            ProbitModel::from_posterior(
                GaussianPosterior::new(DVector::from_vec(vec![3.0]), DMatrix::identity(1, 1)).unwrap(),
                1.0,
            )
            .unwrap(),
        );
        assert!(pr.expected_loglik_term(&[1.0], &[-1e4]).unwrap().is_finite());
    }

    #[test]
    fn sampling_degenerate_and_deterministic() {
        let mean = DVector::from_vec(vec![1.0, -2.0]);
        let post = GaussianPosterior::new(mean.clone(), DMatrix::zeros(2, 2)).unwrap();
        let s = post.sample(5, 3).unwrap();
        for j in 0..5 {
            assert_eq!(s.row(j).transpose(), mean);
        }
        let post = GaussianPosterior::new(mean, dmatrix![2.0, 0.3; 0.3, 1.0]).unwrap();
        assert_eq!(post.sample(10, 42).unwrap(), post.sample(10, 42).unwrap());
        assert_ne!(post.sample(10, 42).unwrap(), post.sample(10, 43).unwrap());
        assert!(post.sample(0, 1).is_err());
    }

    #[test]
    fn posterior_rejects_indefinite_covariance() {
        let r = GaussianPosterior::new(DVector::zeros(2), dmatrix![1.0, 0.0; 0.0, -0.1]);
        assert!(matches!(r, Err(Error::NotPositiveSemidefinite { .. })));
        let r = GaussianPosterior::new(DVector::zeros(2), dmatrix![1.0, 0.5; 0.0, 1.0]);
        assert!(r.is_err());
    }

    #[test]
    fn singular_psd_covariance_samples_via_eigen() {
        // rank one: all samples on the line through the mean along (1, 1)
        let post = GaussianPosterior::new(DVector::zeros(2), dmatrix![1.0, 1.0; 1.0, 1.0]).unwrap();
        let s = post.sample(50, 9).unwrap();
        for j in 0..50 {
            assert!((s[(j, 0)] - s[(j, 1)]).abs() < 1e-12);
        }
    }
}
