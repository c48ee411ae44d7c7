//! A genetic algorithm for bounded integer chromosomes.
//!
//! Every random decision goes through a [`RandomSource`], so a run can be
//! replayed draw-for-draw from a script, or reproduced from a 64-bit seed.
//! The generation loop is evaluation, roulette-wheel selection, one-cut-point
//! crossover and fixed-count mutation, with best-so-far tracking across
//! generations.
//!
//! ```
//! use eqga::{run, GaConfig, LinearEqualityObjective, SeededSource};
//!
//! let objective = LinearEqualityObjective::new(vec![1, 2, 3, 4], 30);
//! let result = run(&GaConfig::default(), &objective, &mut SeededSource::new(7)).unwrap();
//! assert_eq!(result.generations_run, 50);
//! ```

pub mod engine;
pub mod error;
pub mod fixtures;
pub mod model;
pub mod objective;
pub mod oracle;
pub mod rng;
pub mod selection;
pub mod trace;
pub mod variation;

pub use engine::{early_stop_check, evaluate_population, run, run_configured, RunResult};
pub use error::{DrawSite, GaError, ParseError, Phase, RngError};
pub use model::{
    init_population, random_chromosome, Chromosome, GaConfig, GeneBounds, Population, RngMode,
};
pub use objective::{evaluate_linear, fitness, Cost, LinearEqualityObjective, Objective};
pub use oracle::{enumerate_solutions, verify_solution, SolutionSet};
pub use rng::{
    parse_script, CountingSource, Draw, RandomSource, RecordingSource, ScriptedSource, SeededSource,
};
pub use selection::{build_selection_table, roulette_pick, select_population, SelectionTable};
pub use trace::{compare_traces, GenerationTrace, RunSummary, TraceMismatch, TraceRecord};
pub use variation::{
    apply_crossover, apply_mutation, plan_crossover, plan_mutation, CrossoverPlan, MutationPlan,
};
