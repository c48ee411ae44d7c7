use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use eqga::fixtures;
use eqga::trace::{read_jsonl, write_jsonl};
use eqga::{
    compare_traces, enumerate_solutions, evaluate_linear, parse_script, run, Chromosome, GaError,
    RandomSource, ScriptedSource, SeededSource, TraceRecord,
};

use crate::args::{resolve, EnumerateArgs, ReplayArgs, SolveArgs, VerifyArgs};
use crate::{report, CliError, EXIT_NEGATIVE, EXIT_OK};

pub(crate) fn engine_error(e: GaError) -> CliError {
    match e {
        GaError::InvalidConfig(_) | GaError::LengthMismatch { .. } => {
            CliError::Usage(e.to_string())
        }
        GaError::DomainTooLarge { .. } => {
            CliError::Usage(format!("{e} (use --cap N to bound stored solutions)"))
        }
        _ => CliError::Runtime(e.to_string()),
    }
}

fn load_script(path: &Path) -> Result<ScriptedSource, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read script {}: {e}", path.display())))?;
    parse_script(&text)
        .map_err(|e| CliError::Usage(format!("invalid script {}: {e}", path.display())))
}

fn write_trace(path: &Path, records: &[TraceRecord], out: &mut dyn Write) -> Result<(), CliError> {
    if path == Path::new("-") {
        write_jsonl(out, records)?;
    } else {
        let file = File::create(path)
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))?;
        write_jsonl(BufWriter::new(file), records)?;
    }
    Ok(())
}

pub(crate) fn solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let resolved = resolve(&args.instance, Some(&args.run), 50)?;
    let mut config = resolved.config;
    config.record_traces = args.trace.is_some();
    let mut src: Box<dyn RandomSource> = match &args.script {
        Some(path) => Box::new(load_script(path)?),
        None => Box::new(SeededSource::new(
            args.seed.or(resolved.file_seed).unwrap_or(0),
        )),
    };
    let result = run(&config, &resolved.objective, &mut src).map_err(engine_error)?;
    // Keep stdout clean for the trace when it goes there.
    let to_stdout = args.trace.as_deref() == Some(Path::new("-"));
    if !to_stdout {
        report::summary(out, &result)?;
        if result.best_cost == 0 {
            writeln!(
                out,
                "satisfied: {}",
                describe_equality(
                    &resolved.objective.coefficients,
                    &result.best_chromosome,
                    resolved.objective.target
                )
            )?;
        }
    }
    if let Some(path) = &args.trace {
        write_trace(path, &result.records(), out)?;
    }
    Ok(EXIT_OK)
}

fn describe_equality(coeffs: &[i64], chrom: &Chromosome, target: i64) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .zip(chrom.genes())
        .map(|(k, g)| {
            if *k == 1 {
                g.to_string()
            } else {
                format!("{k}*{g}")
            }
        })
        .collect();
    format!("{} = {target}", terms.join(" + "))
}

pub(crate) fn replay(args: &ReplayArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let resolved = resolve(&args.instance, Some(&args.run), 1)?;
    let mut config = resolved.config;
    config.record_traces = true;
    let (mut src, expected) = match &args.script {
        Some(path) => (load_script(path)?, None),
        None => (
            fixtures::worked_example_script(),
            Some(fixtures::worked_example_expected()),
        ),
    };
    let expected = match &args.expect {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| CliError::Runtime(format!("cannot open {}: {e}", path.display())))?;
            Some(read_jsonl(BufReader::new(file)).map_err(|e| {
                CliError::Usage(format!("invalid expected trace {}: {e}", path.display()))
            })?)
        }
        None => expected,
    };

    let result = run(&config, &resolved.objective, &mut src).map_err(engine_error)?;
    let records = result.records();
    let to_stdout = args.trace.as_deref() == Some(Path::new("-"));
    if !to_stdout {
        for t in &result.traces {
            report::generation(out, t)?;
        }
        report::summary(out, &result)?;
        if src.remaining() > 0 {
            writeln!(out, "note: {} script draws left unused", src.remaining())?;
        }
    }
    if let Some(path) = &args.trace {
        write_trace(path, &records, out)?;
    }
    match expected {
        None => Ok(EXIT_OK),
        Some(expected) => match compare_traces(&expected, &records) {
            None => {
                if !to_stdout {
                    writeln!(out, "trace matches expected ({} records)", expected.len())?;
                }
                Ok(EXIT_OK)
            }
            Some(m) => {
                writeln!(out, "trace mismatch: {m}")?;
                Ok(EXIT_NEGATIVE)
            }
        },
    }
}

pub(crate) fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let resolved = resolve(&args.instance, None, 0)?;
    let chrom = Chromosome::new(args.genes.clone());
    let cost = evaluate_linear(&resolved.objective, &chrom).map_err(engine_error)?;
    if cost == 0 {
        writeln!(out, "{chrom}: cost 0, satisfied")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "{chrom}: cost {cost}, not satisfied")?;
        Ok(EXIT_NEGATIVE)
    }
}

pub(crate) fn enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let resolved = resolve(&args.instance, None, 0)?;
    let set = enumerate_solutions(
        &resolved.objective,
        &resolved.config.bounds,
        resolved.config.chromosome_length,
        args.cap,
    )
    .map_err(engine_error)?;
    writeln!(out, "solutions: {}", set.count)?;
    if !set.is_complete() {
        writeln!(out, "stored: {} (capped)", set.solutions.len())?;
    }
    if args.show {
        serde_json::to_writer(&mut *out, &set.solutions)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        writeln!(out)?;
    }
    if let Some(path) = &args.json {
        let file = File::create(path)
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))?;
        serde_json::to_writer(BufWriter::new(file), &set.solutions)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    Ok(EXIT_OK)
}
