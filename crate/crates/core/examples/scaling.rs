//! Batch construction time of projected ACS-FW as the pool grows.

use acsfw::harness::{bench, format_bench_table};

fn main() -> acsfw::Result<()> {
    let rows = bench(&[5_000, 10_000, 20_000, 40_000], 10, 10, 7)?;
    print!("{}", format_bench_table(&rows));
    Ok(())
}
