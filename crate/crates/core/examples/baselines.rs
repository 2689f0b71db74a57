//! Every selection strategy on the same pool, through the common interface.

use acsfw::acquisition::BaldSettings;
use acsfw::harness::synthetic_linreg;
use acsfw::{ModelSpec, SelectionContext, SelectionStrategy, Strategy, Task};

fn main() -> acsfw::Result<()> {
    let (data, _) = synthetic_linreg(220, 3, 0.3, 5)?;
    let labeled = data.subset(&(0..20).collect::<Vec<_>>());
    let pool = data.subset(&(20..220).collect::<Vec<_>>());
    let spec = ModelSpec {
        task: Task::Regression,
        noise_variance: 0.3,
        prior_variance: 1.0,
    };
    let model = spec.fit(&labeled.inputs, &labeled.targets)?;
    let ctx = SelectionContext {
        model: &model,
        spec: &spec,
        labeled_x: &labeled.inputs,
        labeled_y: &labeled.targets,
        pool_x: &pool.inputs,
        pool_y: Some(&pool.targets),
        projections: 10,
        bald: BaldSettings::default(),
    };
    for strategy in Strategy::ALL {
        let mut batch = strategy.select_batch(&ctx, 8, 1)?;
        batch.sort_unstable();
        println!("{:<17} {batch:?}", strategy.name());
    }
    Ok(())
}
