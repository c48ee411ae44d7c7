//! Chromosomes, populations and run configuration.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{GaError, Phase, Result};
use crate::rng::{RandomSource, ScriptedSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneBounds {
    lo: i64,
    hi: i64,
}

impl GeneBounds {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(GaError::InvalidConfig(format!(
                "gene bounds {lo}:{hi} have lo greater than hi"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn contains(&self, gene: i64) -> bool {
        (self.lo..=self.hi).contains(&gene)
    }

    /// Number of distinct gene values.
    pub fn width(&self) -> u128 {
        (self.hi as i128 - self.lo as i128 + 1) as u128
    }
}

impl Default for GeneBounds {
    fn default() -> Self {
        Self { lo: 0, hi: 30 }
    }
}

/// A candidate solution: one integer per decision variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chromosome(Vec<i64>);

impl Chromosome {
    pub fn new(genes: Vec<i64>) -> Self {
        Self(genes)
    }

    pub fn genes(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn within(&self, bounds: &GeneBounds) -> bool {
        self.0.iter().all(|&g| bounds.contains(g))
    }

    pub fn into_genes(self) -> Vec<i64> {
        self.0
    }
}

impl From<Vec<i64>> for Chromosome {
    fn from(genes: Vec<i64>) -> Self {
        Self(genes)
    }
}

impl Index<usize> for Chromosome {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Chromosome {
    fn index_mut(&mut self, i: usize) -> &mut i64 {
        &mut self.0[i]
    }
}

/// Bracketed, zero-padded form: `[02;21;18;03]`.
impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{g:02}")?;
        }
        f.write_str("]")
    }
}

/// Ordered members of one generation. Slot `k` (0-based) is chromosome `k + 1`
/// in the 1-based numbering used by plans and traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Population(Vec<Chromosome>);

impl Population {
    pub fn new(members: Vec<Chromosome>) -> Self {
        Self(members)
    }

    pub fn members(&self) -> &[Chromosome] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Gene count of the first member, or 0 for an empty population.
    pub fn chromosome_length(&self) -> usize {
        self.0.first().map_or(0, Chromosome::len)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Chromosome> {
        self.0.iter()
    }

    /// True when every member has `length` genes, all inside `bounds`.
    pub fn is_well_formed(&self, length: usize, bounds: &GeneBounds) -> bool {
        self.0.iter().all(|c| c.len() == length && c.within(bounds))
    }

    pub fn into_members(self) -> Vec<Chromosome> {
        self.0
    }
}

impl Index<usize> for Population {
    type Output = Chromosome;

    fn index(&self, i: usize) -> &Chromosome {
        &self.0[i]
    }
}

impl IndexMut<usize> for Population {
    fn index_mut(&mut self, i: usize) -> &mut Chromosome {
        &mut self.0[i]
    }
}

impl From<Vec<Vec<i64>>> for Population {
    fn from(rows: Vec<Vec<i64>>) -> Self {
        Self(rows.into_iter().map(Chromosome::new).collect())
    }
}

impl<'a> IntoIterator for &'a Population {
    type Item = &'a Chromosome;
    type IntoIter = std::slice::Iter<'a, Chromosome>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RngMode {
    Seeded(u64),
    Scripted(ScriptedSource),
}

impl Default for RngMode {
    fn default() -> Self {
        RngMode::Seeded(0)
    }
}

/// Run parameters. [`Default`] gives the worked example's settings:
/// six chromosomes of four genes in `[0, 30]`, 50 generations,
/// crossover rate 0.25 and mutation rate 0.1.
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub bounds: GeneBounds,
    pub chromosome_length: usize,
    pub rng_mode: RngMode,
    /// Stop as soon as a zero-cost chromosome has been seen.
    pub stop_on_zero: bool,
    /// Re-insert the best-so-far chromosome after mutation when it was lost.
    pub elitism: bool,
    /// Keep a [`GenerationTrace`](crate::trace::GenerationTrace) per generation.
    pub record_traces: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 6,
            generations: 50,
            crossover_rate: 0.25,
            mutation_rate: 0.1,
            bounds: GeneBounds::default(),
            chromosome_length: 4,
            rng_mode: RngMode::default(),
            stop_on_zero: false,
            elitism: false,
            record_traces: false,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GaError::InvalidConfig(msg));
        if self.population_size < 2 {
            return bad(format!(
                "population size must be at least 2, got {}",
                self.population_size
            ));
        }
        if self.chromosome_length < 2 {
            return bad(format!(
                "chromosome length must be at least 2, got {}",
                self.chromosome_length
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad(format!(
                "crossover rate must be in [0, 1], got {}",
                self.crossover_rate
            ));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad(format!(
                "mutation rate must be in [0, 1], got {}",
                self.mutation_rate
            ));
        }
        if self.bounds.lo > self.bounds.hi {
            return bad(format!(
                "gene bounds {}:{} have lo greater than hi",
                self.bounds.lo, self.bounds.hi
            ));
        }
        if self
            .population_size
            .checked_mul(self.chromosome_length)
            .is_none_or(|cells| cells > i64::MAX as usize)
        {
            return bad("population size times chromosome length overflows".into());
        }
        Ok(())
    }

    /// Gene cells in the whole population.
    pub fn total_genes(&self) -> usize {
        self.population_size * self.chromosome_length
    }
}

/// Draws `length` genes in gene order.
pub fn random_chromosome(
    bounds: &GeneBounds,
    length: usize,
    src: &mut impl RandomSource,
) -> Result<Chromosome> {
    (0..length)
        .map(|_| {
            src.next_int_inclusive(bounds.lo, bounds.hi)
                .map_err(GaError::draw(Phase::Initialization))
        })
        .collect::<Result<Vec<_>>>()
        .map(Chromosome)
}

/// Draws `N * L` integers, chromosome-major.
pub fn init_population(config: &GaConfig, src: &mut impl RandomSource) -> Result<Population> {
    config.validate()?;
    (0..config.population_size)
        .map(|_| random_chromosome(&config.bounds, config.chromosome_length, src))
        .collect::<Result<Vec<_>>>()
        .map(Population)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{parse_script, CountingSource, Draw, SeededSource};

    fn ints(values: &[i64]) -> ScriptedSource {
        ScriptedSource::new(values.iter().map(|&v| Draw::Int(v)).collect()).unwrap()
    }

    #[test]
    fn chromosome_from_script() {
        let c = random_chromosome(&GeneBounds::default(), 4, &mut ints(&[12, 5, 23, 8])).unwrap();
        assert_eq!(c.genes(), &[12, 5, 23, 8]);
        assert_eq!(c.to_string(), "[12;05;23;08]");
    }

    #[test]
    fn degenerate_bounds() {
        let b = GeneBounds::new(7, 7).unwrap();
        let c = random_chromosome(&b, 3, &mut SeededSource::new(1)).unwrap();
        assert_eq!(c.genes(), &[7, 7, 7]);
    }

    #[test]
    fn boundary_genes() {
        let c = random_chromosome(&GeneBounds::default(), 2, &mut ints(&[0, 30])).unwrap();
        assert_eq!(c.genes(), &[0, 30]);
    }

    #[test]
    fn init_worked_example_population() {
        let mut src = ints(&[
            12, 5, 23, 8, 2, 21, 18, 3, 10, 4, 13, 14, 20, 1, 10, 6, 1, 4, 13, 19, 20, 5, 17, 1,
        ]);
        let pop = init_population(&GaConfig::default(), &mut src).unwrap();
        let shown: Vec<String> = pop.iter().map(ToString::to_string).collect();
        assert_eq!(
            shown,
            [
                "[12;05;23;08]",
                "[02;21;18;03]",
                "[10;04;13;14]",
                "[20;01;10;06]",
                "[01;04;13;19]",
                "[20;05;17;01]"
            ]
        );
        assert_eq!(src.remaining(), 0);
    }

    #[test]
    fn zero_bounds_population() {
        let config = GaConfig {
            population_size: 2,
            bounds: GeneBounds::new(0, 0).unwrap(),
            ..GaConfig::default()
        };
        let pop = init_population(&config, &mut SeededSource::new(5)).unwrap();
        assert_eq!(pop, Population::from(vec![vec![0; 4], vec![0; 4]]));
    }

    #[test]
    fn seeded_init_is_deterministic() {
        let config = GaConfig::default();
        let a = init_population(&config, &mut SeededSource::new(77)).unwrap();
        let b = init_population(&config, &mut SeededSource::new(77)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn init_draw_count() {
        let config = GaConfig {
            population_size: 5,
            chromosome_length: 3,
            ..GaConfig::default()
        };
        let mut src = CountingSource::new(SeededSource::new(0));
        init_population(&config, &mut src).unwrap();
        assert_eq!((src.floats(), src.ints()), (0, 15));
    }

    #[test]
    fn init_reports_phase() {
        let mut src = parse_script("i 1\ni 2\n").unwrap();
        let err = init_population(&GaConfig::default(), &mut src).unwrap_err();
        assert_eq!(
            err.to_string(),
            "random script exhausted during initialization"
        );
    }

    #[test]
    fn validation() {
        let ok = GaConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            GaConfig {
                population_size: 1,
                ..ok.clone()
            },
            GaConfig {
                chromosome_length: 1,
                ..ok.clone()
            },
            GaConfig {
                crossover_rate: 1.5,
                ..ok.clone()
            },
            GaConfig {
                mutation_rate: -0.1,
                ..ok.clone()
            },
            GaConfig {
                crossover_rate: f64::NAN,
                ..ok.clone()
            },
        ] {
            assert!(matches!(bad.validate(), Err(GaError::InvalidConfig(_))));
        }
        assert!(GeneBounds::new(3, 2).is_err());
    }

    #[test]
    fn display_pads_and_handles_negatives() {
        assert_eq!(
            Chromosome::new(vec![7, 5, 3, 1]).to_string(),
            "[07;05;03;01]"
        );
        assert_eq!(Chromosome::new(vec![-3, 100]).to_string(), "[-3;100]");
    }

    #[test]
    fn serializes_as_plain_arrays() {
        let pop = Population::from(vec![vec![2, 21, 18, 3]]);
        assert_eq!(serde_json::to_string(&pop).unwrap(), "[[2,21,18,3]]");
    }
}
