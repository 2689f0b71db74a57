//! Projected ACS-FW: batches from random feature projections of the
//! expected log-likelihood, and how the inner-product estimate tightens with J.

use acsfw::harness::synthetic_linreg;
use acsfw::kernels::{euclidean_inner, project};
use acsfw::{acs_fw_projected, LinRegModel, Model};

fn main() -> acsfw::Result<()> {
    let (data, _) = synthetic_linreg(520, 4, 0.5, 3)?;
    let train = data.subset(&(0..20).collect::<Vec<_>>());
    let pool = data.subset(&(20..520).collect::<Vec<_>>());
    let model: Model = LinRegModel::fit(&train.inputs, &train.targets, 0.5, 1.0)?.into();

    for j in [10, 100, 1000] {
        let batch = acs_fw_projected(&model, &pool.inputs, 10, j, 0)?;
        println!("J = {j:>4}: batch {:?}", batch.indices);
    }

    for j in [10, 100, 10_000] {
        let estimates: Vec<f64> = (0..20)
            .map(|seed| project(&model, &pool.inputs, j, seed).and_then(|p| euclidean_inner(&p, 0, 1)))
            .collect::<acsfw::Result<_>>()?;
        let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
        let sd = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / 19.0).sqrt();
        println!("J = {j:>5}: <L0, L1> ~ {mean:.5} (sd over seeds {sd:.5})");
    }
    Ok(())
}
