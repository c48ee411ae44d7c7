//! The generation loop.
//!
//! Per generation the engine requests draws in this fixed order, which is what
//! scripts must follow:
//!
//! 1. `N` selection floats,
//! 2. `N` crossover gate floats,
//! 3. one cut-point integer per parent when there are at least two parents,
//! 4. mutation position integers (including redraws of repeated positions),
//! 5. mutation replacement integers.
//!
//! Initialization draws `N * L` integers before the first generation.

use crate::error::{GaError, Result};
use crate::model::{init_population, Chromosome, GaConfig, Population, RngMode};
use crate::objective::{Cost, Objective};
use crate::rng::{RandomSource, SeededSource};
use crate::selection::select_population;
use crate::trace::{GenerationTrace, RunSummary, TraceRecord};
use crate::variation::{apply_crossover, apply_mutation, plan_crossover, plan_mutation};

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_chromosome: Chromosome,
    pub best_cost: Cost,
    /// 0 when the best came from the initial population.
    pub generation_found: usize,
    pub generations_run: usize,
    /// Best cost after initialization (index 0) and after each generation.
    pub best_cost_history: Vec<Cost>,
    /// Empty unless [`GaConfig::record_traces`] is set.
    pub traces: Vec<GenerationTrace>,
    pub final_population: Population,
}

impl RunResult {
    pub fn summary(&self) -> RunSummary {
        RunSummary {
            best_chromosome: self.best_chromosome.clone(),
            best_cost: self.best_cost,
            generation_found: self.generation_found,
            generations_run: self.generations_run,
        }
    }

    /// Generation records followed by the summary.
    pub fn records(&self) -> Vec<TraceRecord> {
        self.traces
            .iter()
            .cloned()
            .map(TraceRecord::Generation)
            .chain(std::iter::once(TraceRecord::Summary(self.summary())))
            .collect()
    }
}

pub fn early_stop_check(best_cost: Cost, config: &GaConfig) -> bool {
    config.stop_on_zero && best_cost == 0
}

pub fn evaluate_population(objective: &impl Objective, pop: &Population) -> Result<Vec<Cost>> {
    pop.iter().map(|c| objective.evaluate(c)).collect()
}

struct BestSoFar {
    chromosome: Chromosome,
    cost: Cost,
    generation: usize,
}

impl BestSoFar {
    fn observe(best: &mut Option<BestSoFar>, pop: &Population, costs: &[Cost], generation: usize) {
        // First minimum wins ties, and an existing best is only replaced by a strictly better one.
        let Some((k, &cost)) = costs.iter().enumerate().min_by_key(|&(_, c)| *c) else {
            return;
        };
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            *best = Some(BestSoFar {
                chromosome: pop[k].clone(),
                cost,
                generation,
            });
        }
    }
}

/// Runs the configured number of generations against `src`.
pub fn run(
    config: &GaConfig,
    objective: &impl Objective,
    src: &mut impl RandomSource,
) -> Result<RunResult> {
    config.validate()?;
    if let Some(arity) = objective.arity() {
        if arity != config.chromosome_length {
            return Err(GaError::LengthMismatch {
                expected: arity,
                actual: config.chromosome_length,
            });
        }
    }

    let mut pop = init_population(config, src).map_err(|e| e.at_generation(0))?;
    let mut costs = evaluate_population(objective, &pop)?;
    let mut best = None;
    BestSoFar::observe(&mut best, &pop, &costs, 0);
    let mut history = vec![best.as_ref().map_or(Cost::MAX, |b| b.cost)];
    let mut traces = Vec::new();
    let mut generations_run = 0;

    for generation in 1..=config.generations {
        let best_cost = best.as_ref().map_or(Cost::MAX, |b| b.cost);
        if early_stop_check(best_cost, config) {
            break;
        }
        let at = |e: GaError| e.at_generation(generation);

        let (selected, selection) = select_population(&pop, &costs, src).map_err(at)?;
        let crossover = plan_crossover(&selected, config.crossover_rate, src).map_err(at)?;
        let crossed = apply_crossover(&selected, &crossover).map_err(at)?;
        let mutation = plan_mutation(config, src).map_err(at)?;
        let mut mutated = apply_mutation(&crossed, &mutation).map_err(at)?;
        let mut after = evaluate_population(objective, &mutated)?;

        let mut elite_slot = None;
        if config.elitism {
            if let Some(b) = &best {
                let current = after.iter().copied().min().unwrap_or(Cost::MAX);
                if b.cost < current {
                    let worst = after
                        .iter()
                        .enumerate()
                        .max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(&x.0)))
                        .map(|(k, _)| k)
                        .expect("population is non-empty");
                    mutated[worst] = b.chromosome.clone();
                    after[worst] = b.cost;
                    elite_slot = Some(worst + 1);
                }
            }
        }

        BestSoFar::observe(&mut best, &mutated, &after, generation);
        let best_cost = best.as_ref().map_or(Cost::MAX, |b| b.cost);
        history.push(best_cost);
        generations_run = generation;

        if config.record_traces {
            let table = selection.table;
            traces.push(GenerationTrace {
                generation_index: generation,
                population_before: pop.clone(),
                objective_values: costs.clone(),
                fitness_values: table.fitness_values,
                total_fitness: table.total_fitness,
                probabilities: table.probabilities,
                cumulative: table.cumulative,
                selection_draws: selection.draws,
                selected_indices: selection.selected,
                population_after_selection: selected,
                crossover_draws: crossover.gate_draws,
                crossover_parents: crossover.parent_indices,
                cut_points: crossover.cut_points,
                population_after_crossover: crossed,
                mutation_count: mutation.count,
                mutation_positions: mutation.positions,
                mutation_values: mutation.replacement_values,
                mutation_redraws: mutation.redraws,
                population_after_mutation: mutated.clone(),
                objective_values_after_mutation: after.clone(),
                best_objective_so_far: best_cost,
                elite_slot,
            });
        }

        pop = mutated;
        costs = after;
    }

    let best = best.expect("population is non-empty");
    Ok(RunResult {
        best_chromosome: best.chromosome,
        best_cost: best.cost,
        generation_found: best.generation,
        generations_run,
        best_cost_history: history,
        traces,
        final_population: pop,
    })
}

/// Builds the source named by `config.rng_mode` and runs.
pub fn run_configured(config: &GaConfig, objective: &impl Objective) -> Result<RunResult> {
    match &config.rng_mode {
        RngMode::Seeded(seed) => run(config, objective, &mut SeededSource::new(*seed)),
        RngMode::Scripted(script) => run(config, objective, &mut script.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::LinearEqualityObjective;
    use crate::rng::{parse_script, CountingSource};

    fn seeded(config: &GaConfig, seed: u64) -> RunResult {
        run(
            config,
            &LinearEqualityObjective::worked_example(),
            &mut SeededSource::new(seed),
        )
        .unwrap()
    }

    #[test]
    fn zero_generations_reports_initial_best() {
        let config = GaConfig {
            generations: 0,
            ..GaConfig::default()
        };
        let mut src = SeededSource::new(4);
        let initial = init_population(&config, &mut src.clone()).unwrap();
        let costs =
            evaluate_population(&LinearEqualityObjective::worked_example(), &initial).unwrap();
        let result = run(
            &config,
            &LinearEqualityObjective::worked_example(),
            &mut src,
        )
        .unwrap();
        assert_eq!(result.best_cost, *costs.iter().min().unwrap());
        assert_eq!(result.generation_found, 0);
        assert_eq!(result.generations_run, 0);
        assert_eq!(result.final_population, initial);
        assert_eq!(result.best_cost_history.len(), 1);
    }

    #[test]
    fn early_stop_flag() {
        let on = GaConfig {
            stop_on_zero: true,
            ..GaConfig::default()
        };
        assert!(early_stop_check(0, &on));
        assert!(!early_stop_check(0, &GaConfig::default()));
        assert!(!early_stop_check(3, &on));
    }

    #[test]
    fn stop_on_zero_halts_at_discovery() {
        let config = GaConfig {
            stop_on_zero: true,
            generations: 500,
            ..GaConfig::default()
        };
        let hit = (0..200u64)
            .map(|s| seeded(&config, s))
            .find(|r| r.best_cost == 0)
            .expect("some seed finds a solution within 500 generations");
        assert_eq!(hit.generations_run, hit.generation_found);
    }

    #[test]
    fn arity_mismatch_rejected() {
        let config = GaConfig {
            chromosome_length: 3,
            ..GaConfig::default()
        };
        assert!(matches!(
            run(
                &config,
                &LinearEqualityObjective::worked_example(),
                &mut SeededSource::new(0)
            ),
            Err(GaError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn truncated_script_names_phase() {
        let mut text = String::new();
        for g in [
            12, 5, 23, 8, 2, 21, 18, 3, 10, 4, 13, 14, 20, 1, 10, 6, 1, 4, 13, 19, 20, 5, 17, 1,
        ] {
            text.push_str(&format!("i {g}\n"));
        }
        for r in [0.201, 0.284, 0.099, 0.822, 0.398, 0.501, 0.191, 0.259] {
            text.push_str(&format!("f {r}\n"));
        }
        let mut src = parse_script(&text).unwrap();
        let config = GaConfig {
            generations: 1,
            ..GaConfig::default()
        };
        let err = run(
            &config,
            &LinearEqualityObjective::worked_example(),
            &mut src,
        )
        .unwrap_err();
        assert_eq!(
            err.to_string(),
            "random script exhausted during crossover gating, generation 1"
        );
    }

    #[test]
    fn elitism_keeps_best_in_population() {
        let config = GaConfig {
            elitism: true,
            mutation_rate: 0.5,
            ..GaConfig::default()
        };
        let objective = LinearEqualityObjective::worked_example();
        for seed in 0..20 {
            let mut src = CountingSource::new(SeededSource::new(seed));
            let result = run(&config, &objective, &mut src).unwrap();
            let final_costs = evaluate_population(&objective, &result.final_population).unwrap();
            assert_eq!(*final_costs.iter().min().unwrap(), result.best_cost);
        }
    }

    #[test]
    fn traces_recorded_on_request() {
        let config = GaConfig {
            generations: 3,
            record_traces: true,
            ..GaConfig::default()
        };
        let result = seeded(&config, 11);
        assert_eq!(result.traces.len(), 3);
        assert_eq!(
            result
                .traces
                .iter()
                .map(|t| t.generation_index)
                .collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        assert_eq!(
            result.traces[2].population_after_mutation,
            result.final_population
        );
        assert_eq!(result.records().len(), 4);
        let quiet = seeded(
            &GaConfig {
                record_traces: false,
                ..config
            },
            11,
        );
        assert!(quiet.traces.is_empty());
        assert_eq!(quiet.best_cost, result.best_cost);
    }
}
