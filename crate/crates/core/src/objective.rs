//! Objective functions and the fitness transform.

use serde::{Deserialize, Serialize};

use crate::error::{GaError, Result};
use crate::model::Chromosome;

/// Non-negative integer cost. Zero means the chromosome solves the problem.
pub type Cost = u64;

/// Anything the engine can minimise. Implementations must be deterministic
/// and free of side effects.
pub trait Objective {
    fn evaluate(&self, chrom: &Chromosome) -> Result<Cost>;

    /// Expected chromosome length, if the objective fixes one.
    fn arity(&self) -> Option<usize> {
        None
    }
}

impl<O: Objective + ?Sized> Objective for &O {
    fn evaluate(&self, chrom: &Chromosome) -> Result<Cost> {
        (**self).evaluate(chrom)
    }

    fn arity(&self) -> Option<usize> {
        (**self).arity()
    }
}

/// `|sum(coefficients[i] * genes[i]) - target|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearEqualityObjective {
    pub coefficients: Vec<i64>,
    pub target: i64,
}

impl LinearEqualityObjective {
    pub fn new(coefficients: Vec<i64>, target: i64) -> Self {
        Self {
            coefficients,
            target,
        }
    }

    /// `a + 2b + 3c + 4d = 30`.
    pub fn worked_example() -> Self {
        Self::new(vec![1, 2, 3, 4], 30)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Signed left-hand side minus target, computed in 128 bits.
    pub fn deviation(&self, genes: &[i64]) -> Result<i128> {
        if genes.len() != self.coefficients.len() {
            return Err(GaError::LengthMismatch {
                expected: self.coefficients.len(),
                actual: genes.len(),
            });
        }
        let mut sum: i128 = 0;
        for (&k, &g) in self.coefficients.iter().zip(genes) {
            sum = sum
                .checked_add(k as i128 * g as i128)
                .ok_or(GaError::CostOverflow)?;
        }
        sum.checked_sub(self.target as i128)
            .ok_or(GaError::CostOverflow)
    }
}

impl Objective for LinearEqualityObjective {
    fn evaluate(&self, chrom: &Chromosome) -> Result<Cost> {
        evaluate_linear(self, chrom)
    }

    fn arity(&self) -> Option<usize> {
        Some(self.coefficients.len())
    }
}

pub fn evaluate_linear(obj: &LinearEqualityObjective, chrom: &Chromosome) -> Result<Cost> {
    Cost::try_from(obj.deviation(chrom.genes())?.unsigned_abs()).map_err(|_| GaError::CostOverflow)
}

/// `1 / (1 + cost)`, in `(0, 1]`.
pub fn fitness(cost: Cost) -> f64 {
    1.0 / (1.0 + cost as f64)
}
