//! Experiment CLI: exact cumulant tables, envelope bound evaluation, seeded
//! Monte Carlo batches, full verification reports and small-case exhaustive
//! distributions.

mod config;
mod report;
mod runner;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use config::{ExperimentConfig, ResolvedGrid};
use momentgap::bounds::{coefficient_a, leading_bound, moment_gap_bound, GrowthSpec};
use momentgap::combinatorics::gaussian_moment;
use momentgap::estimation::summarize;
use momentgap::exact_models::{
    model_cumulant, standardized_cumulant_exact, standardized_moment_exact, Beta, ModelSpec,
};
use momentgap::simulators::{enumerate_pair_partitions_crossings, SimSpec};
use report::format_float;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "momentgap", version, about = "Moment-gap experiments from cumulant bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact cumulants and standardized moments of one closed-form model
    Exact(ExactArgs),
    /// Evaluate the moment-gap bound for one growth envelope
    Bound(BoundArgs),
    /// Run the Monte Carlo entries of a config and summarize each batch
    Simulate(RunArgs),
    /// Full pipeline: exact gaps, simulations, bounds and decay fits
    Report(RunArgs),
    /// Exhaustive small-case distributions (pair-partition crossings)
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct ExactArgs {
    /// cbe | laguerre | jacobi | ginibre | parallelotope | simplex
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    n2: Option<u64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Largest cumulant/moment order to print
    #[arg(long, default_value_t = 8)]
    orders: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// Moment order
    #[arg(long)]
    k: u32,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Comma-separated growth constants for orders 2, 3, ... (default all 1)
    #[arg(long)]
    constants: Option<String>,
    /// Interpret the constants in factorial form, with (j!)^{1+gamma} implied
    #[arg(long, default_value_t = false)]
    factorial: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment description (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Override the master seed from the config
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; falls back to the config's `[output]` section, then stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Number of chord pairs (at most 8)
    #[arg(long)]
    n: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_exact(args: &ExactArgs) -> anyhow::Result<ExitCode> {
    let beta = || -> anyhow::Result<Beta> {
        Ok(Beta::from_f64(args.beta.context("this model needs --beta")?)?)
    };
    let p = || -> anyhow::Result<u64> { args.p.context("this model needs --p") };
    let model = match args.model.as_str() {
        "cbe" => ModelSpec::Cbe { n: args.n, beta: beta()? },
        "laguerre" => ModelSpec::LaguerreLogDet { n: args.n, p: p()?, beta: beta()? },
        "jacobi" => ModelSpec::JacobiLogDet {
            p: p()?,
            n1: args.n,
            n2: args.n2.context("jacobi needs --n2")?,
            beta: beta()?,
        },
        "ginibre" => ModelSpec::GinibreLogDet { n: args.n, beta: beta()? },
        "parallelotope" => ModelSpec::ParallelotopeLogVol { n: args.n, p: p()? },
        "simplex" => ModelSpec::SimplexLogVol { n: args.n, p: p()? },
        other => bail!("unknown model '{other}'"),
    };
    model.validate()?;
    if args.orders < 1 || args.orders > 20 {
        bail!("--orders must lie in 1..=20");
    }
    let mut text = String::from("order,cumulant,standardized_cumulant,standardized_moment,gaussian_moment\n");
    for j in 1..=args.orders {
        let cumulant = model_cumulant(&model, j)?;
        let standardized = standardized_cumulant_exact(&model, j)?;
        let moment = standardized_moment_exact(&model, j)?;
        text.push_str(&format!(
            "{j},{},{},{},{}\n",
            format_float(cumulant),
            format_float(standardized),
            format_float(moment),
            format_float(gaussian_moment(j)),
        ));
    }
    write_or_print(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(args: &BoundArgs) -> anyhow::Result<ExitCode> {
    if args.k < 3 {
        bail!("--k must be at least 3");
    }
    let needed = (args.k - 1) as usize;
    let constants: Vec<f64> = match &args.constants {
        Some(list) => list
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|e| anyhow::anyhow!("bad constant '{c}': {e}")))
            .collect::<anyhow::Result<_>>()?,
        None => vec![1.0; needed],
    };
    if constants.len() < needed {
        bail!(
            "need {needed} constants for orders 2..={} but got {}",
            args.k,
            constants.len()
        );
    }
    let spec = if args.factorial {
        GrowthSpec::factorial(args.gamma, args.delta, constants)?
    } else {
        GrowthSpec::explicit(args.gamma, args.delta, constants)?
    };
    let mut text = String::from("j,coefficient,term\n");
    for j in 1..=(args.k + 1) / 2 - 1 {
        let a = coefficient_a(j, args.k, &spec)?;
        let term = a * args.delta.powi(-((args.k - 2 * j) as i32));
        text.push_str(&format!("{j},{},{}\n", format_float(a), format_float(term)));
    }
    let bound = moment_gap_bound(args.k, &spec)?;
    let (exponent, constant) = leading_bound(args.k, &spec)?;
    text.push_str(&format!("# bound = {}\n", format_float(bound)));
    text.push_str(&format!(
        "# leading: exponent = {exponent}, constant = {}\n",
        format_float(constant)
    ));
    write_or_print(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .context("building the thread pool")?;
    Ok(pool.install(job))
}

fn load_experiment(args: &RunArgs) -> anyhow::Result<(config::ResolvedExperiment, String)> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut parsed = ExperimentConfig::parse(&text)?;
    if let Some(seed) = args.seed {
        parsed.seed = seed;
    }
    let resolved = parsed.resolve()?;
    Ok((resolved, text))
}

fn cmd_simulate(args: &RunArgs) -> anyhow::Result<ExitCode> {
    let (experiment, _) = load_experiment(args)?;
    let mut text =
        String::from("model,n,replicates,seed,mean,variance,skewness,kurtosis,digest\n");
    let lines = with_pool(args.threads, || -> anyhow::Result<Vec<String>> {
        let mut lines = Vec::new();
        for (entry_idx, entry) in experiment.entries.iter().enumerate() {
            let ResolvedGrid::Sim(points) = &entry.grid else { continue };
            for (point_idx, point) in points.iter().enumerate() {
                let seed = runner::grid_seed(experiment.seed, entry_idx, point_idx);
                let batch = SimSpec::new(point.model.clone(), point.replicates, seed)?.run()?;
                let summary = summarize(&batch, 4)?;
                lines.push(format!(
                    "{},{},{},{},{},{},{},{},{:016x}",
                    entry.label,
                    point.model.primary_size(),
                    point.replicates,
                    seed,
                    format_float(summary.mean()),
                    format_float(summary.variance()),
                    format_float(summary.skewness().unwrap_or(f64::NAN)),
                    format_float(summary.kurtosis().unwrap_or(f64::NAN)),
                    batch.rng_state_digest,
                ));
            }
        }
        Ok(lines)
    })??;
    for line in lines {
        text.push_str(&line);
        text.push('\n');
    }
    write_or_print(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(args: &RunArgs) -> anyhow::Result<ExitCode> {
    let (experiment, config_text) = load_experiment(args)?;
    let output = with_pool(args.threads, || runner::run_experiment(&experiment))?;

    for err in &output.errors {
        eprintln!("row error: {} n={}: {}", err.model, err.n, err.message);
    }

    let csv = report::to_csv(&output);
    let json = report::to_json(&output, &experiment.id, experiment.seed, &config_text);

    let mut wrote = false;
    if let Some(out) = &args.out {
        match args.format.as_str() {
            "csv" => write_or_print(Some(out), &csv)?,
            "json" => write_or_print(Some(out), &json)?,
            other => bail!("unknown format '{other}' (expected csv or json)"),
        }
        wrote = true;
    } else {
        if let Some(path) = &experiment.output.csv {
            write_or_print(Some(Path::new(path)), &csv)?;
            wrote = true;
        }
        if let Some(path) = &experiment.output.json {
            write_or_print(Some(Path::new(path)), &json)?;
            wrote = true;
        }
    }
    if !wrote {
        match args.format.as_str() {
            "csv" => print!("{csv}"),
            "json" => print!("{json}"),
            other => bail!("unknown format '{other}' (expected csv or json)"),
        }
    }

    eprintln!(
        "{}: {} rows, {} decay fits, {} row errors",
        experiment.id,
        output.rows.len(),
        output.fits.len(),
        output.errors.len()
    );
    if output.has_soundness_violation() {
        eprintln!("soundness violation: an exact gap exceeded its bound");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_enumerate(args: &EnumerateArgs) -> anyhow::Result<ExitCode> {
    let dist = enumerate_pair_partitions_crossings(args.n)?;
    let mut text = String::from("crossings,count\n");
    for (value, count) in dist {
        text.push_str(&format!("{value},{count}\n"));
    }
    write_or_print(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Usage errors are config errors for exit-code purposes; help and
            // version requests stay successful.
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Exact(args) => cmd_exact(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Report(args) => cmd_report(args),
        Command::Enumerate(args) => cmd_enumerate(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
