//! Seeded runs over a grid of crossover and mutation rates.

use std::fs::File;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use eqga::variation::mutation_count;
use eqga::{run, GaConfig, GaError, LinearEqualityObjective, SeededSource};

use crate::args::{resolve, SweepArgs};
use crate::commands::engine_error;
use crate::{CliError, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub population: usize,
    pub generations: usize,
    pub seed: u64,
    pub best_cost: u64,
    pub generation_found: usize,
    pub generations_run: usize,
    /// Gene cells mutated over the whole run.
    pub mutated_cells: usize,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellRate {
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub runs: usize,
    pub successes: usize,
}

impl CellRate {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.runs as f64
    }
}

/// Rows come back ordered by crossover rate, then mutation rate, then seed,
/// whatever order the runs finish in.
pub fn run_grid(
    objective: &LinearEqualityObjective,
    base: &GaConfig,
    crossover_rates: &[f64],
    mutation_rates: &[f64],
    seeds: &[u64],
) -> Result<Vec<SweepRow>, GaError> {
    let jobs: Vec<(f64, f64, u64)> = crossover_rates
        .iter()
        .flat_map(|&c| mutation_rates.iter().map(move |&m| (c, m)))
        .flat_map(|(c, m)| seeds.iter().map(move |&s| (c, m, s)))
        .collect();
    jobs.par_iter()
        .map(|&(c, m, seed)| {
            let config = GaConfig {
                crossover_rate: c,
                mutation_rate: m,
                record_traces: false,
                ..base.clone()
            };
            let result = run(&config, objective, &mut SeededSource::new(seed))?;
            Ok(SweepRow {
                crossover_rate: c,
                mutation_rate: m,
                population: config.population_size,
                generations: config.generations,
                seed,
                best_cost: result.best_cost,
                generation_found: result.generation_found,
                generations_run: result.generations_run,
                mutated_cells: mutation_count(m, config.total_genes()) * result.generations_run,
                success: result.best_cost == 0,
            })
        })
        .collect()
}

pub fn cell_rates(rows: &[SweepRow]) -> Vec<CellRate> {
    let mut cells: Vec<CellRate> = Vec::new();
    for row in rows {
        match cells.last_mut() {
            Some(cell)
                if cell.crossover_rate == row.crossover_rate
                    && cell.mutation_rate == row.mutation_rate =>
            {
                cell.runs += 1;
                cell.successes += row.success as usize;
            }
            _ => cells.push(CellRate {
                crossover_rate: row.crossover_rate,
                mutation_rate: row.mutation_rate,
                runs: 1,
                successes: row.success as usize,
            }),
        }
    }
    cells
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

pub(crate) fn sweep(
    args: &SweepArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let resolved = resolve(&args.instance, Some(&args.run), 50)?;
    let base = resolved.config;
    let crossover = args
        .crossover_rates
        .clone()
        .unwrap_or_else(|| vec![base.crossover_rate]);
    let mutation = args
        .mutation_rates
        .clone()
        .unwrap_or_else(|| vec![base.mutation_rate]);
    for &rate in crossover.iter().chain(&mutation) {
        if !(0.0..=1.0).contains(&rate) {
            return Err(CliError::Usage(format!("sweep rate {rate} outside [0, 1]")));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let rows = pool
        .install(|| {
            run_grid(
                &resolved.objective,
                &base,
                &crossover,
                &mutation,
                &args.seeds.0,
            )
        })
        .map_err(engine_error)?;

    let table: &mut dyn Write = match &args.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))?;
            write_csv(file, &rows)?;
            out
        }
        None => {
            write_csv(&mut *out, &rows)?;
            err
        }
    };
    writeln!(
        table,
        "crossover_rate  mutation_rate  runs  successes  success_rate"
    )?;
    for cell in cell_rates(&rows) {
        writeln!(
            table,
            "{:>14}  {:>13}  {:>4}  {:>9}  {:>12.3}",
            cell.crossover_rate,
            cell.mutation_rate,
            cell.runs,
            cell.successes,
            cell.rate()
        )?;
    }
    Ok(EXIT_OK)
}
