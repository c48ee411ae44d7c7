//! Python bindings for `eqga`.
//!
//! Chromosomes cross the boundary as lists of ints, populations as lists of
//! lists, and traces as dicts decoded from the JSON-lines trace format.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use eqga::trace::write_jsonl;
use eqga::{fixtures, Chromosome, GaError, GeneBounds, Population};

fn to_py_err(e: GaError) -> PyErr {
    match e {
        GaError::Draw { .. } | GaError::CostOverflow => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn genes_of(pop: &Population) -> Vec<Vec<i64>> {
    pop.iter().map(|c| c.genes().to_vec()).collect()
}

#[pyclass(name = "GaConfig", from_py_object)]
#[derive(Clone)]
struct PyGaConfig {
    inner: eqga::GaConfig,
}

#[pymethods]
impl PyGaConfig {
    #[new]
    #[pyo3(signature = (
        population_size = 6,
        generations = 50,
        crossover_rate = 0.25,
        mutation_rate = 0.1,
        bounds = (0, 30),
        chromosome_length = 4,
        stop_on_zero = false,
        elitism = false,
        record_traces = false,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        population_size: usize,
        generations: usize,
        crossover_rate: f64,
        mutation_rate: f64,
        bounds: (i64, i64),
        chromosome_length: usize,
        stop_on_zero: bool,
        elitism: bool,
        record_traces: bool,
    ) -> PyResult<Self> {
        let inner = eqga::GaConfig {
            population_size,
            generations,
            crossover_rate,
            mutation_rate,
            bounds: GeneBounds::new(bounds.0, bounds.1).map_err(to_py_err)?,
            chromosome_length,
            stop_on_zero,
            elitism,
            record_traces,
            ..eqga::GaConfig::default()
        };
        inner.validate().map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn population_size(&self) -> usize {
        self.inner.population_size
    }

    #[getter]
    fn generations(&self) -> usize {
        self.inner.generations
    }

    #[getter]
    fn crossover_rate(&self) -> f64 {
        self.inner.crossover_rate
    }

    #[getter]
    fn mutation_rate(&self) -> f64 {
        self.inner.mutation_rate
    }

    #[getter]
    fn bounds(&self) -> (i64, i64) {
        (self.inner.bounds.lo(), self.inner.bounds.hi())
    }

    #[getter]
    fn chromosome_length(&self) -> usize {
        self.inner.chromosome_length
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "GaConfig(population_size={}, generations={}, crossover_rate={}, mutation_rate={}, bounds=({}, {}), chromosome_length={})",
            c.population_size,
            c.generations,
            c.crossover_rate,
            c.mutation_rate,
            c.bounds.lo(),
            c.bounds.hi(),
            c.chromosome_length
        )
    }
}

#[pyclass(name = "LinearEqualityObjective", from_py_object)]
#[derive(Clone)]
struct PyLinearObjective {
    inner: eqga::LinearEqualityObjective,
}

#[pymethods]
impl PyLinearObjective {
    #[new]
    fn new(coefficients: Vec<i64>, target: i64) -> Self {
        Self {
            inner: eqga::LinearEqualityObjective::new(coefficients, target),
        }
    }

    #[getter]
    fn coefficients(&self) -> Vec<i64> {
        self.inner.coefficients.clone()
    }

    #[getter]
    fn target(&self) -> i64 {
        self.inner.target
    }

    fn evaluate(&self, genes: Vec<i64>) -> PyResult<u64> {
        eqga::evaluate_linear(&self.inner, &Chromosome::new(genes)).map_err(to_py_err)
    }

    fn verify(&self, genes: Vec<i64>) -> PyResult<bool> {
        eqga::verify_solution(&self.inner, &Chromosome::new(genes)).map_err(to_py_err)
    }
}

#[pyclass(name = "RunResult", skip_from_py_object)]
struct PyRunResult {
    inner: eqga::RunResult,
}

#[pymethods]
impl PyRunResult {
    #[getter]
    fn best_chromosome(&self) -> Vec<i64> {
        self.inner.best_chromosome.genes().to_vec()
    }

    #[getter]
    fn best_cost(&self) -> u64 {
        self.inner.best_cost
    }

    #[getter]
    fn generation_found(&self) -> usize {
        self.inner.generation_found
    }

    #[getter]
    fn generations_run(&self) -> usize {
        self.inner.generations_run
    }

    #[getter]
    fn best_cost_history(&self) -> Vec<u64> {
        self.inner.best_cost_history.clone()
    }

    #[getter]
    fn final_population(&self) -> Vec<Vec<i64>> {
        genes_of(&self.inner.final_population)
    }

    /// The JSON-lines trace: generation records, then the summary.
    fn to_jsonl(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &self.inner.records())
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        String::from_utf8(buf).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    /// Generation records as dicts.
    #[getter]
    fn traces<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let json = PyModule::import(py, "json")?;
        let list = PyList::empty(py);
        for t in &self.inner.traces {
            let text = serde_json_string(t)?;
            list.append(json.call_method1("loads", (text,))?)?;
        }
        Ok(list)
    }

    fn __repr__(&self) -> String {
        format!(
            "RunResult(best_chromosome={}, best_cost={}, generation_found={})",
            self.inner.best_chromosome, self.inner.best_cost, self.inner.generation_found
        )
    }
}

fn serde_json_string(t: &eqga::GenerationTrace) -> PyResult<String> {
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &[eqga::TraceRecord::Generation(t.clone())])
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Runs the GA with either a seed or a draw script (text in the script format).
#[pyfunction]
#[pyo3(signature = (config, objective, seed = None, script = None))]
fn run(
    py: Python<'_>,
    config: PyGaConfig,
    objective: PyLinearObjective,
    seed: Option<u64>,
    script: Option<&str>,
) -> PyResult<PyRunResult> {
    let result = match (seed, script) {
        (Some(_), Some(_)) => {
            return Err(PyValueError::new_err(
                "pass either seed or script, not both",
            ))
        }
        (_, Some(text)) => {
            let mut src =
                eqga::parse_script(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
            py.detach(|| eqga::run(&config.inner, &objective.inner, &mut src))
        }
        (seed, None) => {
            let mut src = eqga::SeededSource::new(seed.unwrap_or(0));
            py.detach(|| eqga::run(&config.inner, &objective.inner, &mut src))
        }
    }
    .map_err(to_py_err)?;
    Ok(PyRunResult { inner: result })
}

/// One generation of the shipped worked example, with traces.
#[pyfunction]
fn replay_worked_example() -> PyResult<PyRunResult> {
    let result = eqga::run_configured(
        &fixtures::worked_example_config(),
        &fixtures::worked_example_objective(),
    )
    .map_err(to_py_err)?;
    Ok(PyRunResult { inner: result })
}

#[pyfunction]
fn fitness(cost: u64) -> f64 {
    eqga::fitness(cost)
}

/// Fitness, total, probabilities and cumulative values for a cost vector.
#[pyfunction]
fn selection_table<'py>(py: Python<'py>, costs: Vec<u64>) -> PyResult<Bound<'py, PyDict>> {
    let t = eqga::build_selection_table(&costs);
    let d = PyDict::new(py);
    d.set_item("fitness_values", t.fitness_values)?;
    d.set_item("total_fitness", t.total_fitness)?;
    d.set_item("probabilities", t.probabilities)?;
    d.set_item("cumulative", t.cumulative)?;
    Ok(d)
}

/// 1-based index picked by draw `r` on the wheel built from `costs`.
#[pyfunction]
fn roulette_pick(costs: Vec<u64>, r: f64) -> PyResult<usize> {
    if costs.is_empty() {
        return Err(PyValueError::new_err("costs must be non-empty"));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(PyValueError::new_err("r must lie in [0, 1)"));
    }
    Ok(eqga::roulette_pick(&eqga::build_selection_table(&costs), r))
}

/// `(count, solutions)` over the box `bounds ** len(coefficients)`.
#[pyfunction]
#[pyo3(signature = (coefficients, target, bounds = (0, 30), cap = None))]
fn enumerate_solutions(
    py: Python<'_>,
    coefficients: Vec<i64>,
    target: i64,
    bounds: (i64, i64),
    cap: Option<usize>,
) -> PyResult<(u64, Vec<Vec<i64>>)> {
    let bounds = GeneBounds::new(bounds.0, bounds.1).map_err(to_py_err)?;
    let len = coefficients.len();
    let obj = eqga::LinearEqualityObjective::new(coefficients, target);
    let set = py
        .detach(|| eqga::enumerate_solutions(&obj, &bounds, len, cap))
        .map_err(to_py_err)?;
    Ok((
        set.count,
        set.solutions
            .into_iter()
            .map(Chromosome::into_genes)
            .collect(),
    ))
}

/// Script entries as `("f", float)` / `("i", int)` tuples.
#[pyfunction]
fn parse_script<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyList>> {
    let src = eqga::parse_script(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let list = PyList::empty(py);
    for d in src.draws() {
        match *d {
            eqga::Draw::Float(v) => list.append(("f", v))?,
            eqga::Draw::Int(v) => list.append(("i", v))?,
        }
    }
    Ok(list)
}

/// Bracketed zero-padded form, e.g. `[07;05;03;01]`.
#[pyfunction]
fn format_chromosome(genes: Vec<i64>) -> String {
    Chromosome::new(genes).to_string()
}

#[pymodule]
fn pyeqga(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGaConfig>()?;
    m.add_class::<PyLinearObjective>()?;
    m.add_class::<PyRunResult>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(replay_worked_example, m)?)?;
    m.add_function(wrap_pyfunction!(fitness, m)?)?;
    m.add_function(wrap_pyfunction!(selection_table, m)?)?;
    m.add_function(wrap_pyfunction!(roulette_pick, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(parse_script, m)?)?;
    m.add_function(wrap_pyfunction!(format_chromosome, m)?)?;
    m.add("WORKED_EXAMPLE_SCRIPT", fixtures::WORKED_EXAMPLE_SCRIPT)?;
    Ok(())
}
