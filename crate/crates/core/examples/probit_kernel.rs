//! Laplace-approximated probit regression and its Fisher kernel.

use acsfw::kernels::{fisher_kernel, fisher_probit_inner, fisher_probit_norm_sq};
use acsfw::{Model, ProbitModel};
use nalgebra::DMatrix;

fn main() -> acsfw::Result<()> {
    let x = DMatrix::from_row_slice(
        8,
        2,
        &[1.0, 0.5, -0.3, 1.2, 0.8, -1.0, -1.1, -0.4, 0.2, 0.9, 1.5, -0.2, -0.7, 0.3, 0.1, -1.3],
    );
    let y = [1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0];
    let model = ProbitModel::fit(&x, &y, 1.0)?;
    println!("MAP {:.4?}", model.posterior().mean().as_slice());
    println!("Laplace covariance {:.4}", model.posterior().covariance());

    for point in [[1.0, 0.0], [0.0, 1.0], [0.3, -0.3]] {
        let p = model.predict(&point)?.prob.value();
        let diag = fisher_probit_norm_sq(&model, &point)?;
        let via_bvn = fisher_probit_inner(&model, &point, &point)?;
        println!("x = {point:?}: p(y=1) = {p:.4}, |L|^2 = {diag:.6e} (bivariate form {via_bvn:.6e})");
    }

    let wrapped: Model = model.into();
    let pool = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, -1.0, 0.0]);
    println!("kernel {:.5}", fisher_kernel(&wrapped, &pool)?.matrix());
    Ok(())
}
