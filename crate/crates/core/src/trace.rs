//! Per-generation records and their JSON-lines form.
//!
//! A trace file holds one `{"record":"generation",...}` object per generation
//! followed by one `{"record":"summary",...}` object. Indices are 1-based and
//! chromosomes are plain integer arrays.

use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::model::{Chromosome, Population};
use crate::objective::Cost;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationTrace {
    pub generation_index: usize,
    pub population_before: Population,
    pub objective_values: Vec<Cost>,
    pub fitness_values: Vec<f64>,
    pub total_fitness: f64,
    pub probabilities: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub selection_draws: Vec<f64>,
    pub selected_indices: Vec<usize>,
    pub population_after_selection: Population,
    pub crossover_draws: Vec<f64>,
    pub crossover_parents: Vec<usize>,
    pub cut_points: Vec<usize>,
    pub population_after_crossover: Population,
    pub mutation_count: usize,
    pub mutation_positions: Vec<usize>,
    pub mutation_values: Vec<i64>,
    pub mutation_redraws: usize,
    pub population_after_mutation: Population,
    pub objective_values_after_mutation: Vec<Cost>,
    pub best_objective_so_far: Cost,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elite_slot: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub best_chromosome: Chromosome,
    pub best_cost: Cost,
    pub generation_found: usize,
    pub generations_run: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum TraceRecord {
    Generation(GenerationTrace),
    Summary(RunSummary),
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[TraceRecord]) -> io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_jsonl<R: BufRead>(input: R) -> io::Result<Vec<TraceRecord>> {
    let mut records = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("trace line {}: {e}", idx + 1),
            )
        })?;
        records.push(record);
    }
    Ok(records)
}

/// First difference between an expected and an actual trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceMismatch {
    /// 1-based record number.
    pub record: usize,
    pub path: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for TraceMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "record {}: {}: expected {}, got {}",
            self.record, self.path, self.expected, self.actual
        )
    }
}

const FLOAT_TOLERANCE: f64 = 1e-12;

/// Compares every field of every record. Floats match within 1e-12 absolute
/// so fixtures survive decimal round-trips.
pub fn compare_traces(expected: &[TraceRecord], actual: &[TraceRecord]) -> Option<TraceMismatch> {
    for (i, (e, a)) in expected.iter().zip(actual).enumerate() {
        let ev = serde_json::to_value(e).expect("trace records serialize");
        let av = serde_json::to_value(a).expect("trace records serialize");
        let mut path = String::new();
        if let Some((path, exp, act)) = diff_values(&ev, &av, &mut path) {
            return Some(TraceMismatch {
                record: i + 1,
                path,
                expected: exp,
                actual: act,
            });
        }
    }
    if expected.len() != actual.len() {
        return Some(TraceMismatch {
            record: expected.len().min(actual.len()) + 1,
            path: "record count".into(),
            expected: expected.len().to_string(),
            actual: actual.len().to_string(),
        });
    }
    None
}

fn diff_values(e: &Value, a: &Value, path: &mut String) -> Option<(String, String, String)> {
    let here = |path: &str| {
        if path.is_empty() {
            "<root>".to_string()
        } else {
            path.to_string()
        }
    };
    match (e, a) {
        (Value::Object(eo), Value::Object(ao)) => {
            for (key, ev) in eo {
                let len = path.len();
                if !path.is_empty() {
                    path.push('.');
                }
                path.push_str(key);
                let found = match ao.get(key) {
                    Some(av) => diff_values(ev, av, path),
                    None => Some((path.clone(), ev.to_string(), "<missing>".into())),
                };
                if found.is_some() {
                    return found;
                }
                path.truncate(len);
            }
            ao.keys().find(|k| !eo.contains_key(*k)).map(|k| {
                (
                    format!("{}{k}", if path.is_empty() { "" } else { "." }),
                    "<missing>".into(),
                    ao[k].to_string(),
                )
            })
        }
        (Value::Array(ea), Value::Array(aa)) => {
            for (i, (ev, av)) in ea.iter().zip(aa).enumerate() {
                let len = path.len();
                path.push_str(&format!("[{i}]"));
                if let Some(found) = diff_values(ev, av, path) {
                    return Some(found);
                }
                path.truncate(len);
            }
            (ea.len() != aa.len()).then(|| {
                (
                    format!("{} length", here(path)),
                    ea.len().to_string(),
                    aa.len().to_string(),
                )
            })
        }
        (Value::Number(en), Value::Number(an)) if !(en.is_f64() || an.is_f64()) => {
            (en != an).then(|| (here(path), en.to_string(), an.to_string()))
        }
        (Value::Number(en), Value::Number(an)) => {
            let (x, y) = (en.as_f64()?, an.as_f64()?);
            ((x - y).abs() > FLOAT_TOLERANCE).then(|| (here(path), en.to_string(), an.to_string()))
        }
        _ => (e != a).then(|| (here(path), e.to_string(), a.to_string())),
    }
}
