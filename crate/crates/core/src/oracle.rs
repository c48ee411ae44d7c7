//! Exhaustive ground truth for small integer boxes.

use serde::Serialize;

use crate::error::{GaError, Result};
use crate::model::{Chromosome, GeneBounds};
use crate::objective::{evaluate_linear, LinearEqualityObjective};
use crate::rng::RandomSource;
use crate::selection::{roulette_pick, SelectionTable};

/// Largest box scanned without an explicit cap.
pub const SCAN_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionSet {
    /// Zero-cost vectors in lexicographic order, at most `cap` of them.
    pub solutions: Vec<Chromosome>,
    /// Exact number of zero-cost vectors in the box.
    pub count: u64,
    pub bounds: GeneBounds,
    pub length: usize,
}

impl SolutionSet {
    pub fn contains(&self, chrom: &Chromosome) -> bool {
        self.solutions
            .binary_search_by(|s| s.genes().cmp(chrom.genes()))
            .is_ok()
    }

    /// True when every solution in the box was stored.
    pub fn is_complete(&self) -> bool {
        self.solutions.len() as u64 == self.count
    }
}

/// Scans `bounds^length` in lexicographic order. Without a cap, boxes larger
/// than [`SCAN_LIMIT`] are refused; with one, the full box is still scanned
/// for the count but at most `cap` solutions are kept.
pub fn enumerate_solutions(
    obj: &LinearEqualityObjective,
    bounds: &GeneBounds,
    length: usize,
    cap: Option<usize>,
) -> Result<SolutionSet> {
    if obj.len() != length {
        return Err(GaError::LengthMismatch {
            expected: obj.len(),
            actual: length,
        });
    }
    let cells = (0..length).try_fold(1u128, |acc, _| acc.checked_mul(bounds.width()));
    if cap.is_none() && cells.is_none_or(|c| c > SCAN_LIMIT) {
        return Err(GaError::DomainTooLarge {
            cells: cells.unwrap_or(u128::MAX),
            limit: SCAN_LIMIT,
        });
    }
    let cap = cap.unwrap_or(usize::MAX);
    let mut set = SolutionSet {
        solutions: Vec::new(),
        count: 0,
        bounds: *bounds,
        length,
    };
    if length == 0 {
        return Ok(set);
    }

    // Odometer over the box with running partial sums: partial[i] holds the
    // weighted sum of genes 0..i.
    let coeffs: Vec<i128> = obj.coefficients.iter().map(|&k| k as i128).collect();
    let target = obj.target as i128;
    let (lo, hi) = (bounds.lo(), bounds.hi());
    let mut genes = vec![lo; length];
    let mut partial = vec![0i128; length + 1];
    for i in 0..length {
        partial[i + 1] = partial[i] + coeffs[i] * lo as i128;
    }
    let last = length - 1;
    loop {
        // Innermost gene solves directly: coeffs[last] * g = target - partial[last].
        let rest = target - partial[last];
        let k = coeffs[last];
        let hit = if k == 0 {
            (rest == 0).then_some(None)
        } else if rest % k == 0 && bounds.contains_i128(rest / k) {
            Some(Some((rest / k) as i64))
        } else {
            None
        };
        match hit {
            Some(Some(g)) => {
                set.count += 1;
                if set.solutions.len() < cap {
                    genes[last] = g;
                    set.solutions.push(Chromosome::new(genes.clone()));
                }
            }
            Some(None) => {
                // Every value of the last gene solves.
                for g in lo..=hi {
                    set.count += 1;
                    if set.solutions.len() < cap {
                        genes[last] = g;
                        set.solutions.push(Chromosome::new(genes.clone()));
                    }
                }
            }
            None => {}
        }

        // Advance genes 0..last.
        let mut i = last;
        loop {
            if i == 0 {
                return Ok(set);
            }
            i -= 1;
            if genes[i] < hi {
                genes[i] += 1;
                partial[i + 1] = partial[i] + coeffs[i] * genes[i] as i128;
                for j in i + 1..last {
                    genes[j] = lo;
                    partial[j + 1] = partial[j] + coeffs[j] * lo as i128;
                }
                break;
            }
        }
    }
}

impl GeneBounds {
    fn contains_i128(&self, v: i128) -> bool {
        (self.lo() as i128..=self.hi() as i128).contains(&v)
    }
}

pub fn verify_solution(obj: &LinearEqualityObjective, chrom: &Chromosome) -> Result<bool> {
    Ok(evaluate_linear(obj, chrom)? == 0)
}

/// Empirical pick frequencies over `draws` roulette spins.
pub fn selection_frequencies(
    table: &SelectionTable,
    draws: usize,
    src: &mut impl RandomSource,
) -> Result<Vec<f64>> {
    let mut hits = vec![0u64; table.len()];
    for _ in 0..draws {
        let r = src
            .next_float01()
            .map_err(GaError::draw(crate::error::Phase::Selection))?;
        hits[roulette_pick(table, r) - 1] += 1;
    }
    Ok(hits.into_iter().map(|h| h as f64 / draws as f64).collect())
}

/// `(observed - p) / sqrt(p (1 - p) / n)` for each slot.
pub fn selection_z_scores(table: &SelectionTable, observed: &[f64], draws: usize) -> Vec<f64> {
    table
        .probabilities
        .iter()
        .zip(observed)
        .map(|(&p, &o)| {
            let se = (p * (1.0 - p) / draws as f64).sqrt();
            if se == 0.0 {
                if (o - p).abs() == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (o - p) / se
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededSource;
    use crate::selection::build_selection_table;

    fn example() -> LinearEqualityObjective {
        LinearEqualityObjective::worked_example()
    }

    /// Plain nested-loop scan, independent of the odometer.
    fn naive(obj: &LinearEqualityObjective, lo: i64, hi: i64, len: usize) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = vec![lo; len];
        fn rec(
            obj: &LinearEqualityObjective,
            lo: i64,
            hi: i64,
            i: usize,
            cur: &mut Vec<i64>,
            out: &mut Vec<Vec<i64>>,
        ) {
            if i == cur.len() {
                let s: i64 = obj
                    .coefficients
                    .iter()
                    .zip(cur.iter())
                    .map(|(k, g)| k * g)
                    .sum();
                if s == obj.target {
                    out.push(cur.clone());
                }
                return;
            }
            for g in lo..=hi {
                cur[i] = g;
                rec(obj, lo, hi, i + 1, cur, out);
            }
        }
        rec(obj, lo, hi, 0, &mut cur, &mut out);
        out
    }

    #[test]
    fn default_instance_contains_known_solution() {
        let set = enumerate_solutions(&example(), &GeneBounds::default(), 4, None).unwrap();
        assert!(set.contains(&Chromosome::new(vec![7, 5, 3, 1])));
        assert!(set.contains(&Chromosome::new(vec![30, 0, 0, 0])));
        // Pinned from the brute-force scan.
        assert_eq!(set.count, 297);
        assert!(set.is_complete());
        assert_eq!(set.solutions[0].genes(), &[0, 0, 2, 6]);
        assert!(set
            .solutions
            .windows(2)
            .all(|w| w[0].genes() < w[1].genes()));
    }

    #[test]
    fn unreachable_target() {
        let obj = LinearEqualityObjective::new(vec![1, 2, 3, 4], -1);
        let set = enumerate_solutions(&obj, &GeneBounds::default(), 4, None).unwrap();
        assert_eq!(set.count, 0);
        assert!(set.solutions.is_empty());
    }

    #[test]
    fn agrees_with_naive_scan() {
        let cases = [
            (LinearEqualityObjective::new(vec![1, 1], 3), 0, 3),
            (LinearEqualityObjective::new(vec![2, -1, 3], 4), -2, 4),
            (LinearEqualityObjective::new(vec![0, 1, 0], 2), 0, 3),
            (LinearEqualityObjective::new(vec![1, 2, 3, 4], 10), 0, 5),
            (LinearEqualityObjective::new(vec![0, 0], 0), 0, 2),
        ];
        for (obj, lo, hi) in cases {
            let len = obj.len();
            let set =
                enumerate_solutions(&obj, &GeneBounds::new(lo, hi).unwrap(), len, None).unwrap();
            let expected = naive(&obj, lo, hi, len);
            let got: Vec<Vec<i64>> = set.solutions.iter().map(|c| c.genes().to_vec()).collect();
            assert_eq!(got, expected, "{obj:?}");
            assert_eq!(set.count as usize, expected.len());
        }
    }

    #[test]
    fn membership_matches_verify_on_tiny_box() {
        let obj = LinearEqualityObjective::new(vec![1, 2], 3);
        let bounds = GeneBounds::new(0, 3).unwrap();
        let set = enumerate_solutions(&obj, &bounds, 2, None).unwrap();
        for a in 0..=3 {
            for b in 0..=3 {
                let c = Chromosome::new(vec![a, b]);
                assert_eq!(set.contains(&c), verify_solution(&obj, &c).unwrap());
            }
        }
    }

    #[test]
    fn cap_limits_storage_not_count() {
        let set = enumerate_solutions(&example(), &GeneBounds::default(), 4, Some(5)).unwrap();
        assert_eq!(set.solutions.len(), 5);
        assert_eq!(set.count, 297);
        assert!(!set.is_complete());
    }

    #[test]
    fn large_domain_needs_cap() {
        let obj = LinearEqualityObjective::new(vec![1; 6], 30);
        assert!(matches!(
            enumerate_solutions(&obj, &GeneBounds::new(0, 30).unwrap(), 6, None),
            Err(GaError::DomainTooLarge { .. })
        ));
    }

    #[test]
    fn verify_examples() {
        assert!(verify_solution(&example(), &Chromosome::new(vec![7, 5, 3, 1])).unwrap());
        assert!(!verify_solution(&example(), &Chromosome::new(vec![12, 5, 23, 8])).unwrap());
        assert!(verify_solution(&example(), &Chromosome::new(vec![30, 0, 0, 0])).unwrap());
        assert!(verify_solution(&example(), &Chromosome::new(vec![1])).is_err());
    }

    #[test]
    fn frequencies_track_probabilities() {
        let table = build_selection_table(&[0, 1, 3]);
        let n = 20_000;
        let freq = selection_frequencies(&table, n, &mut SeededSource::new(5)).unwrap();
        assert!((freq.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for z in selection_z_scores(&table, &freq, n) {
            assert!(z.abs() < 4.0);
        }
    }
}
