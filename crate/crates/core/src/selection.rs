//! Roulette-wheel selection.
//!
//! A chromosome's slice of the wheel is its fitness divided by the total
//! fitness. A draw `r` in `[0, 1)` picks the smallest 1-based index `i` with
//! `r < C[i]`, where `C` is the running sum of the slices.

use serde::{Deserialize, Serialize};

use crate::error::{GaError, Phase, Result};
use crate::model::Population;
use crate::objective::{fitness, Cost};
use crate::rng::RandomSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTable {
    pub fitness_values: Vec<f64>,
    pub total_fitness: f64,
    pub probabilities: Vec<f64>,
    pub cumulative: Vec<f64>,
}

impl SelectionTable {
    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }
}

pub fn build_selection_table(costs: &[Cost]) -> SelectionTable {
    let fitness_values: Vec<f64> = costs.iter().map(|&c| fitness(c)).collect();
    let total_fitness: f64 = fitness_values.iter().sum();
    let probabilities: Vec<f64> = fitness_values.iter().map(|f| f / total_fitness).collect();
    let cumulative = probabilities
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    SelectionTable {
        fitness_values,
        total_fitness,
        probabilities,
        cumulative,
    }
}

/// 1-based index of the wheel slot containing `r`. A draw left past the last
/// cumulative value by rounding lands on the last slot.
pub fn roulette_pick(table: &SelectionTable, r: f64) -> usize {
    let n = table.cumulative.len();
    // cumulative is non-decreasing, so the first slot with r < C[i] is a partition point.
    let idx = table.cumulative.partition_point(|&c| c <= r);
    idx.min(n.saturating_sub(1)) + 1
}

/// What one selection pass drew and picked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    pub table: SelectionTable,
    pub draws: Vec<f64>,
    /// 1-based source slot of each new member.
    pub selected: Vec<usize>,
}

/// Resamples `pop` with replacement. Draws exactly `N` floats.
pub fn select_population(
    pop: &Population,
    costs: &[Cost],
    src: &mut impl RandomSource,
) -> Result<(Population, SelectionOutcome)> {
    if costs.len() != pop.len() {
        return Err(GaError::LengthMismatch {
            expected: pop.len(),
            actual: costs.len(),
        });
    }
    let table = build_selection_table(costs);
    let draws = (0..pop.len())
        .map(|_| src.next_float01().map_err(GaError::draw(Phase::Selection)))
        .collect::<Result<Vec<_>>>()?;
    let selected: Vec<usize> = draws.iter().map(|&r| roulette_pick(&table, r)).collect();
    let next = Population::new(selected.iter().map(|&i| pop[i - 1].clone()).collect());
    Ok((
        next,
        SelectionOutcome {
            table,
            draws,
            selected,
        },
    ))
}
