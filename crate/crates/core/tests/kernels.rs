mod common;

use acsfw::kernels::{
    acquisition_score_acs, euclidean_inner, fisher_kernel, fisher_linreg_inner, fisher_probit_inner,
    fisher_probit_norm_sq, project, KernelProvider,
};
use acsfw::special::norm_cdf;
use acsfw::{LinRegModel, Model};
use common::{
    dot, gaussian_draws, linreg_euclidean_exact, mean_se, normal_matrix, normal_vec, random_linreg, random_probit,
    rng,
};
use nalgebra::DMatrix;
use rand::Rng;

fn linreg_mc(model: &LinRegModel, xn: &[f64], xm: &[f64], samples: usize, seed: u64) -> (f64, f64) {
    let s0 = model.noise_variance();
    let mu: Vec<f64> = model.posterior().mean().iter().copied().collect();
    let (mn, mm) = (dot(&mu, xn), dot(&mu, xm));
    let xx = dot(xn, xm);
    let vals: Vec<f64> = gaussian_draws(model.posterior(), samples, seed)
        .iter()
        .map(|t| (mn - dot(t, xn)) * (mm - dot(t, xm)) * xx / (s0 * s0))
        .collect();
    mean_se(&vals)
}

#[test]
fn linreg_fisher_matches_gradient_monte_carlo() {
    let mut r = rng(21);
    let mut misses = 0;
    for case in 0..50 {
        let d = r.random_range(1..=5);
        let model = random_linreg(&mut r, d);
        let (xn, xm) = (normal_vec(&mut r, d, 1.0), normal_vec(&mut r, d, 1.0));
        let exact = fisher_linreg_inner(&model, &xn, &xm).unwrap();
        let (m, se) = linreg_mc(&model, &xn, &xm, 100_000, case);
        if (m - exact).abs() > 3.0 * se {
            misses += 1;
        }
    }
    assert!(misses <= 2, "{misses} of 50");
}

#[test]
fn probit_fisher_matches_monte_carlo() {
    let mut r = rng(22);
    let mut misses = 0;
    for case in 0..30 {
        let d = r.random_range(1..=5);
        let model = random_probit(&mut r, d);
        let (xn, xm) = (normal_vec(&mut r, d, 1.0), normal_vec(&mut r, d, 1.0));
        let exact = fisher_probit_inner(&model, &xn, &xm).unwrap();
        let (zn, zm) = (model.zeta(&xn), model.zeta(&xm));
        let base = norm_cdf(zn) * norm_cdf(zm);
        let xx = dot(&xn, &xm);
        let vals: Vec<f64> = gaussian_draws(model.posterior(), 1_000_000, 500 + case)
            .iter()
            .map(|t| xx * (norm_cdf(dot(t, &xn)) * norm_cdf(dot(t, &xm)) - base))
            .collect();
        let (m, se) = mean_se(&vals);
        if (m - exact).abs() > 3.0 * se {
            misses += 1;
        }
    }
    assert!(misses <= 2, "{misses} of 30");
}

#[test]
fn probit_norm_forms_agree() {
    let mut r = rng(23);
    for _ in 0..1000 {
        let d = r.random_range(1..=5);
        let model = random_probit(&mut r, d);
        let scale = r.random_range(0.1..3.0);
        let x = normal_vec(&mut r, d, scale);
        let a = fisher_probit_norm_sq(&model, &x).unwrap();
        let b = fisher_probit_inner(&model, &x, &x).unwrap();
        assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    }
}

#[test]
fn kernels_are_psd_and_satisfy_cauchy_schwarz() {
    let mut r = rng(24);
    for case in 0..20 {
        let d = r.random_range(1..=5);
        let m = r.random_range(2..=50);
        let pool = normal_matrix(&mut r, m, d, 1.0);
        let model: Model = if case % 2 == 0 {
            random_linreg(&mut r, d).into()
        } else {
            random_probit(&mut r, d).into()
        };
        let k = fisher_kernel(&model, &pool).unwrap();
        let kmat = k.matrix();
        let min = kmat.clone().symmetric_eigen().eigenvalues.min();
        assert!(min >= -1e-8 * kmat.trace(), "min eigenvalue {min:e}");
        let proj = project(&model, &pool, 16, case).unwrap();
        for n in 0..m {
            for j in 0..m {
                for p in [&k as &dyn KernelProvider, &proj] {
                    assert!(p.inner(n, j).abs() <= p.norm(n) * p.norm(j) + 1e-10);
                }
            }
        }
    }
}

#[test]
fn kernel_matrix_entries_match_pointwise_functions() {
    let mut r = rng(25);
    let d = 3;
    let pool = normal_matrix(&mut r, 12, d, 1.0);
    let model: Model = random_probit(&mut r, d).into();
    let k = fisher_kernel(&model, &pool).unwrap();
    let Model::Probit(p) = &model else { unreachable!() };
    for n in 0..12 {
        let xn: Vec<f64> = pool.row(n).iter().copied().collect();
        assert_eq!(k.inner(n, n), fisher_probit_norm_sq(p, &xn).unwrap());
        for m in 0..12 {
            let xm: Vec<f64> = pool.row(m).iter().copied().collect();
            if m != n {
                assert!((k.inner(n, m) - fisher_probit_inner(p, &xn, &xm).unwrap()).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn projection_estimator_is_unbiased_for_linreg() {
    let mut r = rng(27);
    let model = random_linreg(&mut r, 3);
    let pool = normal_matrix(&mut r, 2, 3, 1.0);
    let x0: Vec<f64> = pool.row(0).iter().copied().collect();
    let x1: Vec<f64> = pool.row(1).iter().copied().collect();
    let exact = linreg_euclidean_exact(&model, &x0, &x1);
    let wrapped: Model = model.into();
    let vals: Vec<f64> = (0..400)
        .map(|s| euclidean_inner(&project(&wrapped, &pool, 100, s).unwrap(), 0, 1).unwrap())
        .collect();
    let (m, se) = mean_se(&vals);
    assert!((m - exact).abs() < 4.0 * se, "{m} vs {exact} (se {se})");
}

#[test]
fn projection_error_shrinks_with_more_samples() {
    let mut r = rng(28);
    let model = random_linreg(&mut r, 3);
    let pool = normal_matrix(&mut r, 4, 3, 1.0);
    let rows: Vec<Vec<f64>> = (0..4).map(|i| pool.row(i).iter().copied().collect()).collect();
    let wrapped: Model = model.clone().into();
    let rms = |j: usize| {
        let mut acc = 0.0;
        let mut count = 0.0;
        for seed in 0..20 {
            let proj = project(&wrapped, &pool, j, seed).unwrap();
            for n in 0..4 {
                for m in n..4 {
                    let e = euclidean_inner(&proj, n, m).unwrap() - linreg_euclidean_exact(&model, &rows[n], &rows[m]);
                    acc += e * e;
                    count += 1.0;
                }
            }
        }
        (acc / count).sqrt()
    };
    let (e10, e100, e10k) = (rms(10), rms(100), rms(10_000));
    let low = e10 / e100;
    let high = e100 / e10k;
    assert!(low >= 10f64.sqrt() / 3.0 && low <= 3.0 * 10f64.sqrt(), "{low}");
    assert!((10.0 / 3.0..=30.0).contains(&high), "{high}");
}

#[test]
fn acs_score_scales_with_fourth_power() {
    let mut r = rng(29);
    for _ in 0..50 {
        let d = r.random_range(1..=5);
        let model: Model = random_linreg(&mut r, d).into();
        let x = normal_vec(&mut r, d, 1.0);
        let c: f64 = r.random_range(0.1..5.0);
        let xc: Vec<f64> = x.iter().map(|v| c * v).collect();
        let a = acquisition_score_acs(&model, &x).unwrap();
        let b = acquisition_score_acs(&model, &xc).unwrap();
        assert!((b - c.powi(4) * a).abs() <= 1e-10 * b.abs().max(1.0));
    }
}

#[test]
fn dense_kernel_rejects_bad_matrices() {
    use acsfw::DenseKernel;
    assert!(DenseKernel::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0])).is_err());
    assert!(DenseKernel::new(DMatrix::from_row_slice(1, 1, &[f64::NAN])).is_err());
    assert!(DenseKernel::new(DMatrix::zeros(2, 3)).is_err());
}
