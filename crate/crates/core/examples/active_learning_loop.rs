//! Full active learning runs on synthetic regression data, summarized per
//! strategy.

use acsfw::harness::{format_summary_table, run_al, summarize, synthetic_linreg, ALConfig};
use acsfw::Strategy;

fn main() -> acsfw::Result<()> {
    let (data, _) = synthetic_linreg(2000, 5, 0.25, 2024)?;
    let mut rows = Vec::new();
    for strategy in [Strategy::AcsFwProjected, Strategy::AcsFw, Strategy::Random, Strategy::Bald] {
        let config = ALConfig {
            strategy,
            noise_variance: 0.25,
            standardize: false,
            seeds: (0..10).collect(),
            ..ALConfig::default()
        };
        let records = run_al(&config, &data)?;
        rows.push(summarize(strategy.name(), &records)?);
    }
    print!("{}", format_summary_table(&rows));
    Ok(())
}
