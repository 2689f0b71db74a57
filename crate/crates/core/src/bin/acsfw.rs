use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use acsfw::error::Result;
use acsfw::harness::{
    bench, format_bench_table, format_summary_table, load_csv, read_results, run_al, summarize, write_results,
    write_summary_csv, ALConfig, OutputFormat,
};
use acsfw::{Strategy, Task};

#[derive(Parser)]
#[command(name = "acsfw", version, about = "Batch active learning with Frank-Wolfe sparse subset approximation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the active-learning loop over several seeds and write per-iteration records.
    Run(RunArgs),
    /// Aggregate one or more results files into a summary table.
    Summarize {
        #[arg(long = "in", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time projected batch construction across pool sizes.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "10000,20000,40000")]
        pool_sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        projections: usize,
        #[arg(long, default_value_t = 10)]
        batch_size: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    target: String,
    #[arg(long, default_value = "regression")]
    task: Task,
    #[arg(long, default_value = "acs-fw-projected")]
    strategy: Strategy,
    #[arg(long, default_value_t = 20)]
    init_labeled: usize,
    #[arg(long, default_value_t = 10)]
    batch_size: usize,
    #[arg(long, default_value_t = 100)]
    budget: usize,
    #[arg(long, default_value_t = 10)]
    projections: usize,
    #[arg(long, default_value_t = 1.0)]
    noise_var: f64,
    #[arg(long, default_value_t = 1.0)]
    prior_var: f64,
    /// `a..b`, a comma list, or a single seed.
    #[arg(long, default_value = "0..20", value_parser = parse_seeds)]
    seeds: Seeds,
    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,
    #[arg(long, default_value_t = false)]
    standardize: bool,
    #[arg(long, default_value_t = 1000)]
    bald_samples: usize,
    /// Write every time column as 0.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(Clone)]
struct Seeds(Vec<u64>);

fn parse_seeds(s: &str) -> std::result::Result<Seeds, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad seed `{t}`: {e}"));
    let seeds = if let Some((a, b)) = s.split_once("..") {
        (num(a)?..num(b)?).collect()
    } else {
        s.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?
    };
    if seeds.is_empty() {
        return Err(format!("`{s}` names no seeds"));
    }
    Ok(Seeds(seeds))
}

fn run(args: RunArgs) -> Result<()> {
    let config = ALConfig {
        task: args.task,
        strategy: args.strategy,
        init_labeled: args.init_labeled,
        batch_size: args.batch_size,
        budget: args.budget,
        projections: args.projections,
        noise_variance: args.noise_var,
        prior_variance: args.prior_var,
        seeds: args.seeds.0,
        test_fraction: args.test_fraction,
        standardize: args.standardize,
        bald_samples: args.bald_samples,
        timing: !args.no_timing,
    };
    config.validate()?;
    let dataset = load_csv(&args.data, &args.target)?;
    let records = run_al(&config, &dataset)?;
    let format = args.format.unwrap_or_else(|| OutputFormat::from_path(&args.out));
    write_results(&records, &args.out, format)?;
    let failures = records.iter().filter(|r| r.is_failure()).count();
    if failures > 0 {
        log::warn!("{failures} seed(s) aborted; see rows whose metric is NaN or null");
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Summarize { inputs, out } => {
            let mut rows = Vec::new();
            for path in &inputs {
                let records = read_results(path, OutputFormat::from_path(path))?;
                let label = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
                rows.push(summarize(&label, &records)?);
            }
            print!("{}", format_summary_table(&rows));
            if let Some(out) = out {
                write_summary_csv(&rows, out)?;
            }
            Ok(())
        }
        Command::Bench {
            pool_sizes,
            projections,
            batch_size,
            repeats,
        } => {
            print!("{}", format_bench_table(&bench(&pool_sizes, projections, batch_size, repeats)?));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
