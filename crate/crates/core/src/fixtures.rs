//! The shipped one-generation worked example: its draw script, run settings
//! and expected trace.

use crate::model::{GaConfig, RngMode};
use crate::objective::LinearEqualityObjective;
use crate::rng::{parse_script, ScriptedSource};
use crate::trace::{read_jsonl, TraceRecord};

pub const WORKED_EXAMPLE_SCRIPT: &str = include_str!("../fixtures/worked_example.script");
pub const WORKED_EXAMPLE_TRACE: &str = include_str!("../fixtures/worked_example.expected.jsonl");

pub fn worked_example_script() -> ScriptedSource {
    parse_script(WORKED_EXAMPLE_SCRIPT).expect("shipped script parses")
}

pub fn worked_example_objective() -> LinearEqualityObjective {
    LinearEqualityObjective::worked_example()
}

/// Default settings with a single generation and traces on.
pub fn worked_example_config() -> GaConfig {
    GaConfig {
        generations: 1,
        record_traces: true,
        rng_mode: RngMode::Scripted(worked_example_script()),
        ..GaConfig::default()
    }
}

pub fn worked_example_expected() -> Vec<TraceRecord> {
    read_jsonl(WORKED_EXAMPLE_TRACE.as_bytes()).expect("shipped trace parses")
}
