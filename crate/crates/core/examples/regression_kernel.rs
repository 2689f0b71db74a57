//! Closed-form Fisher kernel for Bayesian linear regression, and the link
//! between the ACS score and BALD on a small pool.

use acsfw::acquisition::{bald_scores, select_top_b, BaldSettings};
use acsfw::harness::synthetic_linreg;
use acsfw::kernels::{acquisition_score_acs, fisher_kernel};
use acsfw::{LinRegModel, Model};

fn main() -> acsfw::Result<()> {
    let (data, theta) = synthetic_linreg(40, 3, 0.25, 1)?;
    println!("true weights {theta:.3?}");
    let train = data.subset(&(0..15).collect::<Vec<_>>());
    let pool = data.subset(&(15..40).collect::<Vec<_>>());
    let model: Model = LinRegModel::fit(&train.inputs, &train.targets, 0.25, 1.0)?.into();
    println!("posterior mean {:.3?}", model.posterior().mean().as_slice());

    let k = fisher_kernel(&model, &pool.inputs)?;
    println!("kernel block for the first four pool points:\n{:.4}", k.matrix().view((0, 0), (4, 4)));

    let ratio: Vec<f64> = pool
        .inputs
        .row_iter()
        .map(|x| {
            let x: Vec<f64> = x.iter().copied().collect();
            let sq: f64 = x.iter().map(|v| v * v).sum();
            acquisition_score_acs(&model, &x).map(|s| s / sq)
        })
        .collect::<acsfw::Result<_>>()?;
    let bald = bald_scores(&model, &pool.inputs, BaldSettings::default())?;
    println!(
        "argmax ACS/|x|^2 = {}, argmax BALD = {}",
        select_top_b(&ratio, 1)[0],
        select_top_b(&bald, 1)[0]
    );
    Ok(())
}
