#![allow(dead_code)]

use std::f64::consts::PI;

use acsfw::{GaussianPosterior, LinRegModel, ProbitModel};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adapt(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    adapt(&mut f, a, b, tol, 40)
}

/// Same as [`integrate`] with interior breakpoints.
pub fn integrate_with(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    let pieces = (pts.len() - 1) as f64;
    pts.windows(2).map(|w| adapt(&mut f, w[0], w[1], tol / pieces, 40)).sum()
}

pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

const TAIL: f64 = 40.0;

/// Φ by quadrature of the density, integrating the smaller tail.
pub fn cdf_oracle(z: f64) -> f64 {
    if z <= -TAIL {
        0.0
    } else if z >= TAIL {
        1.0
    } else if z <= 0.0 {
        integrate(phi, -TAIL, z, 1e-17)
    } else {
        1.0 - integrate(phi, z, TAIL, 1e-17)
    }
}

/// `(1/2π) ∫₀^a exp(−h²(1+x²)/2)/(1+x²) dx` by adaptive quadrature.
pub fn owens_t_oracle(h: f64, a: f64) -> f64 {
    let f = |x: f64| (-0.5 * h * h * (1.0 + x * x)).exp() / (1.0 + x * x);
    let sign = a.signum();
    sign * integrate(f, 0.0, a.abs(), 1e-15) / (2.0 * PI)
}

/// `P(X ≤ h, Y ≤ k)` for a standard bivariate normal with correlation `rho`
/// as the nested integral `∫_{−∞}^h φ(x) Φ((k − ρx)/√(1−ρ²)) dx`, with the
/// inner Φ also evaluated by quadrature.
pub fn bvn_oracle(h: f64, k: f64, rho: f64) -> f64 {
    assert!(rho.abs() < 1.0);
    let r = (1.0 - rho * rho).sqrt();
    let lo = -TAIL;
    if h <= lo {
        return 0.0;
    }
    let inner = |x: f64| phi(x) * cdf_oracle((k - rho * x) / r);
    let mut breaks = vec![0.0];
    if rho != 0.0 {
        breaks.push(k / rho);
    }
    integrate_with(inner, lo, h, &breaks, 1e-14)
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn normal_vec(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| scale * normal(rng)).collect()
}

pub fn normal_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| scale * normal(rng))
}

/// Random posterior with mean entries of size `mean_scale` and covariance
/// `AAᵀ/d + floor·I`.
pub fn random_posterior(rng: &mut ChaCha8Rng, d: usize, mean_scale: f64, cov_scale: f64) -> GaussianPosterior {
    let mean = DVector::from_vec(normal_vec(rng, d, mean_scale));
    let a = normal_matrix(rng, d, d, 1.0);
    let cov = (&a * a.transpose()) * (cov_scale / d as f64) + DMatrix::identity(d, d) * (0.05 * cov_scale);
    let cov = (&cov + cov.transpose()) * 0.5;
    GaussianPosterior::new(mean, cov).unwrap()
}

pub fn random_linreg(rng: &mut ChaCha8Rng, d: usize) -> LinRegModel {
    let post = random_posterior(rng, d, 1.0, 1.0);
    let noise = rng.random_range(0.3..2.0);
    LinRegModel::from_posterior(post, noise, 1.0).unwrap()
}

pub fn random_probit(rng: &mut ChaCha8Rng, d: usize) -> ProbitModel {
    let post = random_posterior(rng, d, 0.7, 0.5);
    ProbitModel::from_posterior(post, 1.0).unwrap()
}

/// `θ` samples from a Gaussian via a Cholesky factor, independent of the
/// library sampler.
pub fn gaussian_draws(post: &GaussianPosterior, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let d = post.dim();
    let l = post.covariance().clone().cholesky().unwrap().l();
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let z = DVector::from_vec(normal_vec(&mut r, d, 1.0));
            (post.mean() + &l * z).iter().copied().collect()
        })
        .collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn quad(m: &DMatrix<f64>, a: &[f64], b: &[f64]) -> f64 {
    (DVector::from_column_slice(a).transpose() * m * DVector::from_column_slice(b))[0]
}

/// Exact `E_θ[L_n(θ) L_m(θ)]` for linear regression: with `u = (μ − θ)ᵀx`
/// Gaussian, `L = c − u²/(2σ₀²)` and `E[u_n²u_m²] = S_nn S_mm + 2 S_nm²`.
pub fn linreg_euclidean_exact(model: &LinRegModel, xn: &[f64], xm: &[f64]) -> f64 {
    let s0 = model.noise_variance();
    let cov = model.posterior().covariance();
    let (snn, smm, snm) = (quad(cov, xn, xn), quad(cov, xm, xm), quad(cov, xn, xm));
    let c = |s: f64| {
        let pv = s0 + s;
        -0.5 * (2.0 * PI * s0).ln() - pv / (2.0 * s0) + 0.5 * (2.0 * PI * std::f64::consts::E * pv).ln()
    };
    let (cn, cm) = (c(snn), c(smm));
    cn * cm - cn * smm / (2.0 * s0) - cm * snn / (2.0 * s0) + (snn * smm + 2.0 * snm * snm) / (4.0 * s0 * s0)
}

/// Minimizer of the FW objective along the segment toward vertex `f`, found
/// on a uniform grid of `steps + 1` values of `γ ∈ [0, 1]`.
pub fn grid_gamma(k: &DMatrix<f64>, w: &[f64], f: usize, sigma: f64, sigma_f: f64, steps: usize) -> f64 {
    let m = w.len();
    let objective = |g: f64| {
        let v: Vec<f64> = (0..m)
            .map(|i| {
                let wi = (1.0 - g) * w[i] + if i == f { g * sigma / sigma_f } else { 0.0 };
                1.0 - wi
            })
            .collect();
        quad(k, &v, &v)
    };
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..=steps {
        let g = i as f64 / steps as f64;
        let o = objective(g);
        if o < best.0 {
            best = (o, g);
        }
    }
    best.1
}

/// `(1 − w)ᵀK(1 − w)`
pub fn relaxed_objective(k: &DMatrix<f64>, w: &[f64]) -> f64 {
    let v: Vec<f64> = w.iter().map(|x| 1.0 - x).collect();
    quad(k, &v, &v)
}

/// Random PSD kernel `VVᵀ` from `rank` random features per point.
pub fn random_kernel(rng: &mut ChaCha8Rng, m: usize, rank: usize) -> DMatrix<f64> {
    let v = normal_matrix(rng, m, rank, 1.0);
    let k = &v * v.transpose();
    (&k + k.transpose()) * 0.5
}
