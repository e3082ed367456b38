//! Python bindings: models, configurations, knapsack instances and stage
//! planning. Decimal values cross the boundary as strings with one
//! fractional digit ("17.5"); inputs may also be ints or floats.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use morphplan::datasets::{
    builtin_configuration, builtin_documents, builtin_model, builtin_stage_plans, enterprise_model,
};
use morphplan::mckp::verify_selection;
use morphplan::morphology::ChangeDelta;
use morphplan::report::Style;
use morphplan::{Comparator, Error, Item, SolverKind, Tenths};

create_exception!(
    morphplan_py,
    InfeasibleError,
    PyException,
    "No selection satisfies the budget."
);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Infeasible => InfeasibleError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn tenths(value: &Bound<'_, PyAny>) -> PyResult<Tenths> {
    if let Ok(text) = value.extract::<String>() {
        return text.parse().map_err(to_py);
    }
    if let Ok(units) = value.extract::<i64>() {
        return units
            .checked_mul(10)
            .map(Tenths)
            .ok_or_else(|| PyValueError::new_err("value out of range"));
    }
    let float: f64 = value.extract()?;
    format!("{float}").parse().map_err(to_py)
}

fn solver_kind(name: &str) -> PyResult<SolverKind> {
    name.parse().map_err(PyValueError::new_err)
}

fn comparator(name: &str) -> PyResult<Comparator> {
    name.parse().map_err(PyValueError::new_err)
}

#[pyclass(name = "Model", module = "morphplan_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModel {
    inner: morphplan::ComponentTree,
}

#[pymethods]
impl PyModel {
    /// Built-in model: "wireless" or "enterprise".
    #[staticmethod]
    #[pyo3(signature = (name = "wireless"))]
    fn builtin(name: &str) -> PyResult<Self> {
        let inner = match name {
            "wireless" => builtin_model(),
            "enterprise" => enterprise_model(),
            other => return Err(PyValueError::new_err(format!("unknown built-in model {other:?}"))),
        };
        Ok(PyModel { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        morphplan::parse_model(text)
            .map(|inner| PyModel { inner })
            .map_err(to_py)
    }

    fn to_json(&self) -> String {
        morphplan::serialize_model(&self.inner)
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id().to_string()
    }

    #[getter]
    fn leaves(&self) -> Vec<String> {
        self.inner.leaves().iter().map(|l| l.id.clone()).collect()
    }

    fn alternatives(&self, leaf: &str) -> PyResult<Vec<String>> {
        let leaf = self
            .inner
            .leaf(leaf)
            .ok_or_else(|| PyValueError::new_err(format!("unknown leaf {leaf:?}")))?;
        Ok(leaf.alternatives.iter().map(|a| a.id.clone()).collect())
    }

    /// Findings as strings; empty when the configuration is valid.
    fn validate(&self, config: &PyConfiguration) -> Vec<String> {
        morphplan::validate_configuration(&self.inner, &config.inner)
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    fn render(&self, config: &PyConfiguration) -> PyResult<String> {
        morphplan::render_configuration(&self.inner, &config.inner).map_err(to_py)
    }

    /// `[(leaf, from, to), ...]` in depth-first leaf order.
    fn diff(&self, a: &PyConfiguration, b: &PyConfiguration) -> PyResult<Vec<(String, String, String)>> {
        let deltas = morphplan::diff_configurations(&self.inner, &a.inner, &b.inner).map_err(to_py)?;
        Ok(deltas.into_iter().map(|d| (d.leaf, d.from_alt, d.to_alt)).collect())
    }

    #[pyo3(signature = (config, deltas, id = None))]
    fn apply(
        &self,
        config: &PyConfiguration,
        deltas: Vec<(String, String, String)>,
        id: Option<String>,
    ) -> PyResult<PyConfiguration> {
        let deltas: Vec<ChangeDelta> = deltas.into_iter().map(|(l, f, t)| ChangeDelta::new(l, f, t)).collect();
        let mut inner = morphplan::apply_deltas(&self.inner, &config.inner, &deltas).map_err(to_py)?;
        if let Some(id) = id {
            inner.id = id;
        }
        Ok(PyConfiguration { inner })
    }

    fn __repr__(&self) -> String {
        format!("Model({:?}, leaves={})", self.inner.id(), self.inner.leaves().len())
    }
}

#[pyclass(name = "Configuration", module = "morphplan_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConfiguration {
    inner: morphplan::Configuration,
}

#[pymethods]
impl PyConfiguration {
    #[new]
    fn new(id: String, tree_id: String, assignment: BTreeMap<String, String>) -> Self {
        PyConfiguration {
            inner: morphplan::Configuration::from_pairs(id, tree_id, assignment),
        }
    }

    /// Built-in configuration such as "S5G" or "S5G_adv1".
    #[staticmethod]
    fn builtin(id: &str) -> PyResult<Self> {
        builtin_configuration(id)
            .map(|inner| PyConfiguration { inner })
            .ok_or_else(|| PyValueError::new_err(format!("unknown built-in configuration {id:?}")))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        morphplan::Configuration::parse(text)
            .map(|inner| PyConfiguration { inner })
            .map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_pretty()
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id.clone()
    }

    #[getter]
    fn tree_id(&self) -> String {
        self.inner.tree_id.clone()
    }

    #[getter]
    fn assignment(&self) -> BTreeMap<String, String> {
        self.inner.assignment.clone()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Configuration({:?})", self.inner.id)
    }
}

#[pyclass(name = "Solution", module = "morphplan_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySolution {
    inner: morphplan::MckpSolution,
}

#[pymethods]
impl PySolution {
    /// 1-based item index per group, None where nothing is chosen.
    #[getter]
    fn selection(&self) -> Vec<Option<usize>> {
        self.inner.selection.iter().map(|s| s.map(|j| j + 1)).collect()
    }

    #[getter]
    fn profit(&self) -> String {
        self.inner.total_profit.to_string()
    }

    #[getter]
    fn cost(&self) -> String {
        self.inner.total_cost.to_string()
    }

    #[getter]
    fn solver(&self) -> &'static str {
        self.inner.solver.as_str()
    }

    fn to_json(&self) -> String {
        self.inner.to_json_pretty()
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(profit={}, cost={}, solver={})",
            self.inner.total_profit, self.inner.total_cost, self.inner.solver
        )
    }
}

#[pyclass(name = "Instance", module = "morphplan_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: morphplan::MckpInstance,
}

#[pymethods]
impl PyInstance {
    /// `groups` is a list of lists of `(profit, cost)` pairs.
    #[new]
    #[pyo3(signature = (groups, budget, comparator = "inclusive"))]
    fn new(
        groups: Vec<Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>)>>,
        budget: Bound<'_, PyAny>,
        comparator: &str,
    ) -> PyResult<Self> {
        let groups = groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|(p, c)| Ok(Item::new(tenths(p)?, tenths(c)?)))
                    .collect::<PyResult<Vec<_>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner =
            morphplan::MckpInstance::new(groups, tenths(&budget)?, self::comparator(comparator)?).map_err(to_py)?;
        Ok(PyInstance { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        morphplan::MckpInstance::parse(text)
            .map(|inner| PyInstance { inner })
            .map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_pretty()
    }

    #[getter]
    fn budget(&self) -> String {
        self.inner.budget().to_string()
    }

    #[getter]
    fn group_sizes(&self) -> Vec<usize> {
        self.inner.group_sizes()
    }

    #[pyo3(signature = (solver = "dp"))]
    fn solve(&self, solver: &str) -> PyResult<PySolution> {
        morphplan::solve(&self.inner, solver_kind(solver)?)
            .map(|inner| PySolution { inner })
            .map_err(to_py)
    }

    /// Checks `(group, item)` pairs, 1-based. Returns the findings.
    fn verify(&self, selection: Vec<(usize, usize)>) -> PyResult<Vec<String>> {
        let picks = selection
            .into_iter()
            .map(|(g, j)| match (g.checked_sub(1), j.checked_sub(1)) {
                (Some(g), Some(j)) => Ok((g, j)),
                _ => Err(PyValueError::new_err("group and item indices are 1-based")),
            })
            .collect::<PyResult<Vec<_>>>()?;
        let (findings, _, _) = verify_selection(&self.inner, &picks);
        Ok(findings.iter().map(ToString::to_string).collect())
    }
}

#[pyclass(name = "StagePlan", module = "morphplan_py", frozen, from_py_object)]
#[derive(Clone)]
struct PyStagePlan {
    inner: morphplan::StagePlan,
}

#[pymethods]
impl PyStagePlan {
    /// The two built-in wireless improvement stages.
    #[staticmethod]
    fn builtin() -> (Self, Self) {
        let (a, b) = builtin_stage_plans();
        (PyStagePlan { inner: a }, PyStagePlan { inner: b })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        morphplan::StagePlan::parse(text)
            .map(|inner| PyStagePlan { inner })
            .map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_pretty()
    }

    #[getter]
    fn stage_id(&self) -> String {
        self.inner.stage_id.clone()
    }

    fn instance(&self) -> PyResult<PyInstance> {
        self.inner.instance().map(|inner| PyInstance { inner }).map_err(to_py)
    }

    /// Operation ids, grouped.
    fn operations(&self) -> Vec<Vec<String>> {
        self.inner
            .groups
            .iter()
            .map(|g| g.operations.iter().map(|op| op.id.clone()).collect())
            .collect()
    }
}

/// Plans the stages in order and returns the strategy report (JSON, or
/// aligned text with `text=True`).
#[pyfunction]
#[pyo3(signature = (model, initial, stages, solver = None, text = false))]
fn plan(
    model: &PyModel,
    initial: &PyConfiguration,
    stages: Vec<PyStagePlan>,
    solver: Option<&str>,
    text: bool,
) -> PyResult<String> {
    let kind = solver.map(solver_kind).transpose()?;
    let stages: Vec<morphplan::StagePlan> = stages
        .into_iter()
        .map(|s| match kind {
            Some(kind) => s.inner.with_solver(kind),
            None => s.inner,
        })
        .collect();
    let strategy = morphplan::plan_chain(&model.inner, &initial.inner, &stages).map_err(to_py)?;
    let report = morphplan::render_strategy(&model.inner, &strategy).map_err(to_py)?;
    Ok(if text {
        report.to_text(Style::Plain)
    } else {
        report.to_json_pretty()
    })
}

/// The built-in two-stage wireless chain from S5G.
#[pyfunction]
#[pyo3(signature = (solver = None, text = false))]
fn plan_example(solver: Option<&str>, text: bool) -> PyResult<String> {
    let (a, b) = PyStagePlan::builtin();
    let initial = PyConfiguration::builtin("S5G")?;
    plan(&PyModel::builtin("wireless")?, &initial, vec![a, b], solver, text)
}

/// Built-in documents as `{file name: contents}`.
#[pyfunction]
fn datasets() -> BTreeMap<String, String> {
    builtin_documents().into_iter().collect()
}

#[pymodule]
fn morphplan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyConfiguration>()?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyStagePlan>()?;
    m.add_function(wrap_pyfunction!(plan, m)?)?;
    m.add_function(wrap_pyfunction!(plan_example, m)?)?;
    m.add_function(wrap_pyfunction!(datasets, m)?)?;
    m.add("InfeasibleError", m.py().get_type::<InfeasibleError>())?;
    Ok(())
}
