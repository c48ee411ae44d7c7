//! Human-readable rendering of runs and traces.

use std::io::{self, Write};

use eqga::variation::locate;
use eqga::{GenerationTrace, Population, RunResult};

fn list<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn list6(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.6}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn population(out: &mut dyn Write, title: &str, pop: &Population) -> io::Result<()> {
    writeln!(out, "  {title}:")?;
    for (k, c) in pop.iter().enumerate() {
        writeln!(out, "    Chromosome[{}] = {c}", k + 1)?;
    }
    Ok(())
}

pub fn summary(out: &mut dyn Write, result: &RunResult) -> io::Result<()> {
    writeln!(out, "best chromosome: {}", result.best_chromosome)?;
    writeln!(out, "best cost: {}", result.best_cost)?;
    writeln!(out, "generation found: {}", result.generation_found)?;
    writeln!(out, "generations run: {}", result.generations_run)
}

pub fn generation(out: &mut dyn Write, t: &GenerationTrace) -> io::Result<()> {
    let len = t.population_before.chromosome_length();
    writeln!(out, "generation {}", t.generation_index)?;
    writeln!(out, "  evaluation:")?;
    for (k, c) in t.population_before.iter().enumerate() {
        writeln!(
            out,
            "    Chromosome[{}] = {c}  F_obj = {}  fitness = {:.6}  P = {:.6}  C = {:.6}",
            k + 1,
            t.objective_values[k],
            t.fitness_values[k],
            t.probabilities[k],
            t.cumulative[k]
        )?;
    }
    writeln!(out, "  total fitness: {:.6}", t.total_fitness)?;
    writeln!(out, "  selection draws: {}", list6(&t.selection_draws))?;
    writeln!(out, "  selected: {}", list(&t.selected_indices))?;
    population(out, "after selection", &t.population_after_selection)?;
    writeln!(out, "  crossover draws: {}", list6(&t.crossover_draws))?;
    writeln!(out, "  parents: {}", list(&t.crossover_parents))?;
    writeln!(out, "  cut points: {}", list(&t.cut_points))?;
    population(out, "after crossover", &t.population_after_crossover)?;
    let cells: Vec<String> = t
        .mutation_positions
        .iter()
        .map(|&p| {
            let (c, g) = locate(p, len);
            format!("{p} (chromosome {c} gene {g})")
        })
        .collect();
    writeln!(out, "  mutations: {}", t.mutation_count)?;
    writeln!(out, "  positions: {}", cells.join(", "))?;
    writeln!(out, "  values: {}", list(&t.mutation_values))?;
    if let Some(slot) = t.elite_slot {
        writeln!(out, "  elite re-inserted at: {slot}")?;
    }
    writeln!(out, "  after mutation:")?;
    for (k, c) in t.population_after_mutation.iter().enumerate() {
        writeln!(
            out,
            "    Chromosome[{}] = {c}  F_obj = {}",
            k + 1,
            t.objective_values_after_mutation[k]
        )?;
    }
    writeln!(out, "  best so far: {}", t.best_objective_so_far)
}
