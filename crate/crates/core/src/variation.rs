//! One-cut-point crossover and fixed-count mutation.
//!
//! All indices in plans are 1-based: parent `k` is population slot `k - 1`,
//! mutation position `p` is gene `(p - 1) % L` of slot `(p - 1) / L`.

use serde::{Deserialize, Serialize};

use crate::error::{GaError, Phase, Result};
use crate::model::{Chromosome, GaConfig, Population};
use crate::rng::RandomSource;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CrossoverPlan {
    /// One gate draw per population slot, in slot order.
    pub gate_draws: Vec<f64>,
    /// Strictly increasing 1-based slots chosen as parents.
    pub parent_indices: Vec<usize>,
    /// One cut per mating, in `[1, L - 1]`. Empty when fewer than two parents.
    pub cut_points: Vec<usize>,
}

impl CrossoverPlan {
    /// `(first, second, cut)` for each mating, 1-based. Parent `j` mates with
    /// parent `j + 1`, the last with the first.
    pub fn matings(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let m = self.parent_indices.len();
        self.cut_points.iter().enumerate().map(move |(j, &cut)| {
            (
                self.parent_indices[j],
                self.parent_indices[(j + 1) % m],
                cut,
            )
        })
    }
}

/// Slot `k` becomes a parent iff its gate draw is below `rate`. With two or
/// more parents, one cut point per parent follows, in mating order.
pub fn plan_crossover(
    pop: &Population,
    rate: f64,
    src: &mut impl RandomSource,
) -> Result<CrossoverPlan> {
    let gate_draws = (0..pop.len())
        .map(|_| {
            src.next_float01()
                .map_err(GaError::draw(Phase::CrossoverGating))
        })
        .collect::<Result<Vec<_>>>()?;
    let parent_indices: Vec<usize> = gate_draws
        .iter()
        .enumerate()
        .filter(|(_, &r)| r < rate)
        .map(|(k, _)| k + 1)
        .collect();
    let mut cut_points = Vec::new();
    if parent_indices.len() >= 2 {
        let max_cut = pop.chromosome_length() as i64 - 1;
        for _ in &parent_indices {
            let cut = src
                .next_int_inclusive(1, max_cut)
                .map_err(GaError::draw(Phase::CutPoints))?;
            cut_points.push(cut as usize);
        }
    }
    Ok(CrossoverPlan {
        gate_draws,
        parent_indices,
        cut_points,
    })
}

/// First `cut` genes of `first`, the rest from `second`.
pub fn one_point_cross(first: &Chromosome, second: &Chromosome, cut: usize) -> Chromosome {
    first.genes()[..cut]
        .iter()
        .chain(&second.genes()[cut..])
        .copied()
        .collect::<Vec<_>>()
        .into()
}

/// Offspring are built from the pre-crossover population and overwrite their
/// first parent's slot. Populations with fewer than two parents pass through.
pub fn apply_crossover(pop: &Population, plan: &CrossoverPlan) -> Result<Population> {
    let mut next = pop.clone();
    if plan.parent_indices.len() < 2 {
        return Ok(next);
    }
    let len = pop.chromosome_length();
    if plan.cut_points.len() != plan.parent_indices.len() {
        return Err(GaError::InvalidConfig(format!(
            "crossover plan has {} parents but {} cut points",
            plan.parent_indices.len(),
            plan.cut_points.len()
        )));
    }
    if let Some(&bad) = plan
        .parent_indices
        .iter()
        .find(|&&p| p == 0 || p > pop.len())
    {
        return Err(GaError::InvalidConfig(format!(
            "crossover parent {bad} outside population of {}",
            pop.len()
        )));
    }
    for (first, second, cut) in plan.matings() {
        if cut == 0 || cut >= len {
            return Err(GaError::InvalidCutPoint {
                cut,
                max: len.saturating_sub(1),
            });
        }
        next[first - 1] = one_point_cross(&pop[first - 1], &pop[second - 1], cut);
    }
    Ok(next)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MutationPlan {
    pub count: usize,
    /// Distinct 1-based cells in `[1, L * N]`.
    pub positions: Vec<usize>,
    pub replacement_values: Vec<i64>,
    /// Position draws rejected because they repeated an earlier position.
    pub redraws: usize,
}

/// `round_half_up(rate * total_genes)`, capped at `total_genes`.
pub fn mutation_count(rate: f64, total_genes: usize) -> usize {
    ((rate * total_genes as f64 + 0.5).floor().max(0.0) as usize).min(total_genes)
}

/// 1-based cell to 1-based `(chromosome, gene)`.
pub fn locate(position: usize, length: usize) -> (usize, usize) {
    ((position - 1) / length + 1, (position - 1) % length + 1)
}

/// Draws `count` distinct positions (redrawing repeats), then `count`
/// replacement genes within bounds.
pub fn plan_mutation(config: &GaConfig, src: &mut impl RandomSource) -> Result<MutationPlan> {
    let total = config.total_genes();
    let count = mutation_count(config.mutation_rate, total);
    let mut positions = Vec::with_capacity(count);
    let mut redraws = 0;
    while positions.len() < count {
        let p = src
            .next_int_inclusive(1, total as i64)
            .map_err(GaError::draw(Phase::MutationPositions))? as usize;
        if positions.contains(&p) {
            redraws += 1;
        } else {
            positions.push(p);
        }
    }
    let replacement_values = (0..count)
        .map(|_| {
            src.next_int_inclusive(config.bounds.lo(), config.bounds.hi())
                .map_err(GaError::draw(Phase::MutationValues))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MutationPlan {
        count,
        positions,
        replacement_values,
        redraws,
    })
}

pub fn apply_mutation(pop: &Population, plan: &MutationPlan) -> Result<Population> {
    let len = pop.chromosome_length();
    let total = len * pop.len();
    let mut next = pop.clone();
    for (&p, &value) in plan.positions.iter().zip(&plan.replacement_values) {
        if p == 0 || p > total {
            return Err(GaError::InvalidConfig(format!(
                "mutation position {p} outside [1, {total}]"
            )));
        }
        let (chrom, gene) = locate(p, len);
        next[chrom - 1][gene - 1] = value;
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GeneBounds;
    use crate::rng::{CountingSource, Draw, ScriptedSource, SeededSource};
    use proptest::prelude::*;

    fn selected_population() -> Population {
        Population::from(vec![
            vec![2, 21, 18, 3],
            vec![10, 4, 13, 14],
            vec![12, 5, 23, 8],
            vec![20, 5, 17, 1],
            vec![10, 4, 13, 14],
            vec![20, 1, 10, 6],
        ])
    }

    fn crossed_population() -> Population {
        Population::from(vec![
            vec![2, 5, 17, 1],
            vec![10, 4, 13, 14],
            vec![12, 5, 23, 8],
            vec![20, 4, 13, 14],
            vec![10, 4, 18, 3],
            vec![20, 1, 10, 6],
        ])
    }

    fn script(draws: Vec<Draw>) -> ScriptedSource {
        ScriptedSource::new(draws).unwrap()
    }

    #[test]
    fn example_crossover_plan() {
        let mut draws: Vec<Draw> = [0.191, 0.259, 0.760, 0.006, 0.159, 0.340]
            .into_iter()
            .map(Draw::Float)
            .collect();
        draws.extend([1, 1, 2].map(Draw::Int));
        let mut src = script(draws);
        let plan = plan_crossover(&selected_population(), 0.25, &mut src).unwrap();
        assert_eq!(plan.parent_indices, vec![1, 4, 5]);
        assert_eq!(plan.cut_points, vec![1, 1, 2]);
        assert_eq!(
            plan.matings().collect::<Vec<_>>(),
            vec![(1, 4, 1), (4, 5, 1), (5, 1, 2)]
        );
        assert_eq!(src.remaining(), 0);
    }

    #[test]
    fn example_crossover_result() {
        let plan = CrossoverPlan {
            gate_draws: vec![],
            parent_indices: vec![1, 4, 5],
            cut_points: vec![1, 1, 2],
        };
        assert_eq!(
            apply_crossover(&selected_population(), &plan).unwrap(),
            crossed_population()
        );
    }

    #[test]
    fn rate_extremes() {
        let pop = selected_population();
        let plan = plan_crossover(&pop, 0.0, &mut SeededSource::new(1)).unwrap();
        assert!(plan.parent_indices.is_empty() && plan.cut_points.is_empty());
        let plan = plan_crossover(&pop, 1.0, &mut SeededSource::new(1)).unwrap();
        assert_eq!(plan.parent_indices, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(plan.cut_points.len(), 6);
    }

    #[test]
    fn single_parent_skips_cut_draws() {
        let pop = Population::from(vec![vec![1, 2, 3]; 3]);
        let mut src = script(vec![Draw::Float(0.9), Draw::Float(0.1), Draw::Float(0.9)]);
        let plan = plan_crossover(&pop, 0.5, &mut src).unwrap();
        assert_eq!(plan.parent_indices, vec![2]);
        assert!(plan.cut_points.is_empty());
        assert_eq!(apply_crossover(&pop, &plan).unwrap(), pop);
    }

    #[test]
    fn identical_parents_at_last_cut() {
        let pop = Population::from(vec![vec![3, 1, 4, 1]; 2]);
        let plan = CrossoverPlan {
            gate_draws: vec![],
            parent_indices: vec![1, 2],
            cut_points: vec![3, 3],
        };
        assert_eq!(apply_crossover(&pop, &plan).unwrap(), pop);
    }

    #[test]
    fn two_parents_first_gene_swap() {
        // Hand-computed: each child keeps its own first gene and takes the rest from its partner.
        let pop = Population::from(vec![vec![1, 2, 3, 4], vec![5, 6, 7, 8]]);
        let plan = CrossoverPlan {
            gate_draws: vec![],
            parent_indices: vec![1, 2],
            cut_points: vec![1, 1],
        };
        assert_eq!(
            apply_crossover(&pop, &plan).unwrap(),
            Population::from(vec![vec![1, 6, 7, 8], vec![5, 2, 3, 4]])
        );
    }

    #[test]
    fn invalid_cut_point() {
        let pop = Population::from(vec![vec![1, 2, 3, 4], vec![5, 6, 7, 8]]);
        for cut in [0, 4] {
            let plan = CrossoverPlan {
                gate_draws: vec![],
                parent_indices: vec![1, 2],
                cut_points: vec![cut, 1],
            };
            assert_eq!(
                apply_crossover(&pop, &plan),
                Err(GaError::InvalidCutPoint { cut, max: 3 })
            );
        }
    }

    #[test]
    fn simultaneous_write_back() {
        // Slot 1 is overwritten by the first mating; the last mating must still see the original.
        let pop = Population::from(vec![vec![1, 1, 1], vec![2, 2, 2], vec![3, 3, 3]]);
        let plan = CrossoverPlan {
            gate_draws: vec![],
            parent_indices: vec![1, 2, 3],
            cut_points: vec![1, 1, 1],
        };
        assert_eq!(
            apply_crossover(&pop, &plan).unwrap(),
            Population::from(vec![vec![1, 2, 2], vec![2, 3, 3], vec![3, 1, 1]])
        );
    }

    #[test]
    fn mutation_counts() {
        assert_eq!(mutation_count(0.1, 24), 2);
        assert_eq!(mutation_count(0.0, 24), 0);
        assert_eq!(mutation_count(0.25, 10), 3);
        assert_eq!(mutation_count(0.5, 5), 3);
        assert_eq!(mutation_count(1.0, 24), 24);
    }

    #[test]
    fn example_mutation_plan() {
        let mut src = script([12, 18, 2, 5].map(Draw::Int).to_vec());
        let plan = plan_mutation(&GaConfig::default(), &mut src).unwrap();
        assert_eq!(plan.count, 2);
        assert_eq!(plan.positions, vec![12, 18]);
        assert_eq!(plan.replacement_values, vec![2, 5]);
        assert_eq!(plan.redraws, 0);
    }

    #[test]
    fn zero_rate_draws_nothing() {
        let config = GaConfig {
            mutation_rate: 0.0,
            ..GaConfig::default()
        };
        let mut src = script(vec![]);
        let plan = plan_mutation(&config, &mut src).unwrap();
        assert_eq!(plan, MutationPlan::default());
    }

    #[test]
    fn repeated_position_is_redrawn() {
        let mut src = script([12, 12, 18, 2, 5].map(Draw::Int).to_vec());
        let plan = plan_mutation(&GaConfig::default(), &mut src).unwrap();
        assert_eq!(plan.positions, vec![12, 18]);
        assert_eq!(plan.redraws, 1);
        assert_eq!(src.remaining(), 0);
    }

    #[test]
    fn position_mapping() {
        assert_eq!(locate(12, 4), (3, 4));
        assert_eq!(locate(18, 4), (5, 2));
        assert_eq!(locate(1, 4), (1, 1));
        assert_eq!(locate(24, 4), (6, 4));
    }

    #[test]
    fn example_mutation_result() {
        let plan = MutationPlan {
            count: 2,
            positions: vec![12, 18],
            replacement_values: vec![2, 5],
            redraws: 0,
        };
        let out = apply_mutation(&crossed_population(), &plan).unwrap();
        assert_eq!(out[2].to_string(), "[12;05;23;02]");
        assert_eq!(out[4].to_string(), "[10;05;18;03]");
        for k in [0, 1, 3, 5] {
            assert_eq!(out[k], crossed_population()[k]);
        }
    }

    #[test]
    fn mutation_position_out_of_range() {
        let plan = MutationPlan {
            count: 1,
            positions: vec![25],
            replacement_values: vec![0],
            redraws: 0,
        };
        assert!(apply_mutation(&crossed_population(), &plan).is_err());
    }

    fn population_strategy() -> impl Strategy<Value = (Population, usize)> {
        (2usize..8, 2usize..7).prop_flat_map(|(n, l)| {
            prop::collection::vec(prop::collection::vec(0i64..=30, l), n)
                .prop_map(move |rows| (Population::from(rows), l))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn crossover_genes_come_from_parents((pop, l) in population_strategy(), rate in 0.0f64..=1.0, seed in any::<u64>()) {
            let mut src = CountingSource::new(SeededSource::new(seed));
            let plan = plan_crossover(&pop, rate, &mut src).unwrap();
            let m = plan.parent_indices.len();
            prop_assert_eq!(src.floats(), pop.len());
            prop_assert_eq!(src.ints(), if m >= 2 { m } else { 0 });
            prop_assert!(plan.parent_indices.windows(2).all(|w| w[0] < w[1]));
            let next = apply_crossover(&pop, &plan).unwrap();
            prop_assert!(next.is_well_formed(l, &GeneBounds::new(0, 30).unwrap()));
            prop_assert_eq!(next.len(), pop.len());
            for (first, second, cut) in plan.matings() {
                prop_assert!((1..l).contains(&cut));
                for i in 0..l {
                    let parent = if i < cut { &pop[first - 1] } else { &pop[second - 1] };
                    prop_assert_eq!(next[first - 1][i], parent[i]);
                }
            }
            for k in 1..=pop.len() {
                if !plan.parent_indices.contains(&k) || m < 2 {
                    prop_assert_eq!(&next[k - 1], &pop[k - 1]);
                }
            }
        }

        #[test]
        fn mutation_touches_exactly_count_cells((pop, l) in population_strategy(), rate in 0.0f64..=1.0, seed in any::<u64>()) {
            let config = GaConfig {
                population_size: pop.len(),
                chromosome_length: l,
                mutation_rate: rate,
                bounds: GeneBounds::new(31, 40).unwrap(),
                ..GaConfig::default()
            };
            let mut src = CountingSource::new(SeededSource::new(seed));
            let plan = plan_mutation(&config, &mut src).unwrap();
            prop_assert_eq!(src.floats(), 0);
            prop_assert_eq!(src.ints(), 2 * plan.count + plan.redraws);
            prop_assert_eq!(plan.positions.len(), plan.count);
            let next = apply_mutation(&pop, &plan).unwrap();
            // Replacements lie outside the original gene range, so changed cells are countable.
            let changed = pop.iter().zip(&next)
                .flat_map(|(a, b)| a.genes().iter().zip(b.genes()))
                .filter(|(a, b)| a != b)
                .count();
            prop_assert_eq!(changed, plan.count);
            prop_assert!(next.iter().all(|c| c.len() == l && c.genes().iter().all(|&g| (0..=40).contains(&g))));
        }
    }
}
