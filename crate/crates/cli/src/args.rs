use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use eqga::{GaConfig, GeneBounds, LinearEqualityObjective, RngMode};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "eqga",
    version,
    about = "Genetic algorithm for integer linear equalities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the GA on an instance and print the best chromosome.
    Solve(SolveArgs),
    /// Run under a scripted random source and check the trace.
    Replay(ReplayArgs),
    /// Run a grid of crossover and mutation rates over many seeds.
    Sweep(SweepArgs),
    /// Evaluate one chromosome against the instance.
    Verify(VerifyArgs),
    /// Count (and optionally list) every exact solution in the gene box.
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Flat JSON file of settings; flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Equality coefficients, comma separated.
    #[arg(
        long,
        value_name = "LIST",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub coeffs: Option<Vec<i64>>,
    /// Right-hand side of the equality.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<i64>,
    /// Gene range as LO:HI.
    #[arg(long, value_name = "LO:HI", value_parser = parse_bounds, allow_hyphen_values = true)]
    pub bounds: Option<(i64, i64)>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Population size.
    #[arg(long)]
    pub pop: Option<usize>,
    /// Number of generations.
    #[arg(long)]
    pub gens: Option<usize>,
    #[arg(long)]
    pub crossover_rate: Option<f64>,
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    /// Stop once a zero-cost chromosome has been found.
    #[arg(long)]
    pub stop_on_zero: bool,
    /// Keep the best-so-far chromosome in the population.
    #[arg(long)]
    pub elitism: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, conflicts_with = "script")]
    pub seed: Option<u64>,
    /// Draw script instead of a seed.
    #[arg(long, value_name = "PATH")]
    pub script: Option<PathBuf>,
    /// Write a JSON-lines trace ("-" for stdout).
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Draw script; defaults to the shipped worked example.
    #[arg(long, value_name = "PATH")]
    pub script: Option<PathBuf>,
    /// Expected JSON-lines trace; defaults to the shipped one when --script is omitted.
    #[arg(long, value_name = "PATH")]
    pub expect: Option<PathBuf>,
    /// Write the produced JSON-lines trace ("-" for stdout).
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub crossover_rates: Option<Vec<f64>>,
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub mutation_rates: Option<Vec<f64>>,
    /// Seeds as A..B (half open) or a comma list.
    #[arg(long, value_name = "SEEDS", value_parser = parse_seeds, default_value = "0..100")]
    pub seeds: SeedList,
    /// CSV report path; CSV goes to stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Genes, comma separated.
    #[arg(
        value_name = "GENES",
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub genes: Vec<i64>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Keep at most this many solutions; also lifts the scan-size guard.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Print the solutions as a JSON array.
    #[arg(long)]
    pub show: bool,
    /// Write the solutions as JSON to a file.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedList(pub Vec<u64>);

fn parse_seeds(text: &str) -> Result<SeedList, String> {
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|e| format!("bad seed range start: {e}"))?;
        let b: u64 = b
            .trim()
            .parse()
            .map_err(|e| format!("bad seed range end: {e}"))?;
        if a >= b {
            return Err(format!("empty seed range {a}..{b}"));
        }
        return Ok(SeedList((a..b).collect()));
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad seed `{s}`: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(SeedList)
}

fn parse_bounds(text: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("bounds must look like LO:HI, got `{text}`"))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound: {e}"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("lower bound {lo} exceeds upper bound {hi}"));
    }
    Ok((lo, hi))
}

/// Keys accepted in a `--config` file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub coeffs: Option<Vec<i64>>,
    pub target: Option<i64>,
    pub bounds: Option<(i64, i64)>,
    pub pop: Option<usize>,
    pub gens: Option<usize>,
    pub crossover_rate: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub seed: Option<u64>,
    pub stop_on_zero: Option<bool>,
    pub elitism: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Instance and run settings after merging defaults, config file and flags.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub objective: LinearEqualityObjective,
    pub config: GaConfig,
    pub file_seed: Option<u64>,
}

impl InstanceArgs {
    pub fn file(&self) -> Result<FileConfig, CliError> {
        self.config
            .as_deref()
            .map(FileConfig::load)
            .transpose()
            .map(Option::unwrap_or_default)
    }
}

pub fn resolve(
    instance: &InstanceArgs,
    run: Option<&RunArgs>,
    default_generations: usize,
) -> Result<Resolved, CliError> {
    let file = instance.file()?;
    let defaults = GaConfig::default();
    let coeffs = instance
        .coeffs
        .clone()
        .or(file.coeffs)
        .unwrap_or_else(|| vec![1, 2, 3, 4]);
    if coeffs.len() < 2 {
        return Err(CliError::Usage(format!(
            "--coeffs needs at least 2 values (one per gene), got {}",
            coeffs.len()
        )));
    }
    let target = instance.target.or(file.target).unwrap_or(30);
    let (lo, hi) = instance
        .bounds
        .or(file.bounds)
        .unwrap_or((defaults.bounds.lo(), defaults.bounds.hi()));
    let bounds = GeneBounds::new(lo, hi).map_err(|e| CliError::Usage(e.to_string()))?;

    let flag = |f: fn(&RunArgs) -> bool| run.is_some_and(f);
    let config = GaConfig {
        population_size: run
            .and_then(|r| r.pop)
            .or(file.pop)
            .unwrap_or(defaults.population_size),
        generations: run
            .and_then(|r| r.gens)
            .or(file.gens)
            .unwrap_or(default_generations),
        crossover_rate: run
            .and_then(|r| r.crossover_rate)
            .or(file.crossover_rate)
            .unwrap_or(defaults.crossover_rate),
        mutation_rate: run
            .and_then(|r| r.mutation_rate)
            .or(file.mutation_rate)
            .unwrap_or(defaults.mutation_rate),
        bounds,
        chromosome_length: coeffs.len(),
        rng_mode: RngMode::Seeded(0),
        stop_on_zero: flag(|r| r.stop_on_zero) || file.stop_on_zero.unwrap_or(false),
        elitism: flag(|r| r.elitism) || file.elitism.unwrap_or(false),
        record_traces: false,
    };
    config.validate().map_err(|e| {
        CliError::Usage(format!(
            "{e} (check --pop, --crossover-rate, --mutation-rate, --bounds)"
        ))
    })?;
    Ok(Resolved {
        objective: LinearEqualityObjective::new(coeffs, target),
        config,
        file_seed: file.seed,
    })
}
