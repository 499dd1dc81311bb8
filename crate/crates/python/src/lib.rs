//! Python module `firefly`. Reports come back as plain dicts decoded from
//! the library's JSON form.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use firefly_core::analysis;
use firefly_core::dynamics::{self, Configuration};
use firefly_core::graph::{self, Family};
use firefly_core::stochastic::{self, NoiseMode, NoiseModel};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn config(g: &graph::Graph, n: u32, states: Vec<u32>) -> PyResult<Configuration> {
    if states.len() != g.vertex_count() {
        return Err(PyValueError::new_err(format!(
            "configuration has {} states but the graph has {} vertices",
            states.len(),
            g.vertex_count()
        )));
    }
    Configuration::new(n, states).map_err(err)
}

fn noise(g: &graph::Graph, p: f64, mode: &str) -> PyResult<NoiseModel> {
    let mode = match mode {
        "edge_reception" | "edge" => NoiseMode::EdgeReception,
        "vertex_emission" | "vertex" => NoiseMode::VertexEmission,
        other => return Err(PyValueError::new_err(format!("unknown noise mode `{other}`"))),
    };
    NoiseModel::uniform(g, mode, p).map_err(err)
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "firefly", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: graph::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertices: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: graph::Graph::new(vertices, edges).map_err(err)? })
    }

    /// `path:5`, `cycle:4`, `star:3`, `complete:3` or `tree:0-1,1-2`.
    #[staticmethod]
    fn family(spec: &str) -> PyResult<Self> {
        let f: Family = spec.parse().map_err(err)?;
        Ok(PyGraph { inner: f.build().map_err(err)? })
    }

    #[staticmethod]
    fn path(m: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: graph::Graph::path(m).map_err(err)? })
    }

    #[staticmethod]
    fn cycle(m: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: graph::Graph::cycle(m).map_err(err)? })
    }

    #[staticmethod]
    fn star(k: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: graph::Graph::star(k).map_err(err)? })
    }

    #[staticmethod]
    fn complete(m: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: graph::Graph::complete(m).map_err(err)? })
    }

    /// Parses the edge-list text format.
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: graph::parse_edge_list(text).map_err(err)? })
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.inner.check_vertex(v).map_err(err)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.inner.check_vertex(v).map_err(err)?;
        Ok(self.inner.degree(v))
    }

    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn is_tree(&self) -> bool {
        self.inner.is_tree()
    }

    /// Maximal stars as dicts with `center`, `leaves` and `root`.
    fn stars<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.find_stars_and_branches())
    }

    fn to_dot(&self) -> String {
        graph::to_dot(&self.inner, "G", None)
    }

    fn __repr__(&self) -> String {
        format!("Graph({}, {:?})", self.inner.vertex_count(), self.inner.edges())
    }
}

/// One synchronous step.
#[pyfunction]
fn step(g: &PyGraph, n: u32, states: Vec<u32>) -> PyResult<Vec<u32>> {
    let x = config(&g.inner, n, states)?;
    Ok(dynamics::step(&g.inner, &x).map_err(err)?.states().to_vec())
}

/// Orbit to its first repeated configuration, as a trace dict.
#[pyfunction]
#[pyo3(signature = (g, n, states, cap=None))]
fn orbit<'py>(py: Python<'py>, g: &PyGraph, n: u32, states: Vec<u32>, cap: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    let x = config(&g.inner, n, states)?;
    let o = dynamics::compute_orbit(&g.inner, &x, cap).map_err(err)?;
    to_py(py, &dynamics::Trace::new(&g.inner, &o))
}

/// Width of a configuration (shortest covering arc).
#[pyfunction]
fn width(n: u32, states: Vec<u32>) -> PyResult<u32> {
    Configuration::new(n, states).map_err(err)?.width(None).map_err(err)
}

#[pyfunction]
fn blinking_state(n: u32) -> u32 {
    dynamics::blinking_state(n)
}

#[pyfunction]
#[pyo3(signature = (g, n, budget=10_000_000))]
fn is_n_synchronizing<'py>(py: Python<'py>, g: &PyGraph, n: u32, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| analysis::is_n_synchronizing(&g.inner, n, budget)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (n, m, budget=10_000_000))]
fn max_sync_time_path<'py>(py: Python<'py>, n: u32, m: usize, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| analysis::max_sync_time_path(n, m, budget)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (n, max_vertices, budget=10_000_000))]
fn verify_tree_theorem<'py>(py: Python<'py>, n: u32, max_vertices: usize, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| analysis::verify_tree_theorem(n, max_vertices, budget)).map_err(err)?;
    to_py(py, &r)
}

/// Blink snapshots at `v` with recurrent/transient classes.
#[pyfunction]
fn return_map<'py>(py: Python<'py>, g: &PyGraph, n: u32, states: Vec<u32>, v: usize) -> PyResult<Bound<'py, PyAny>> {
    let x = config(&g.inner, n, states)?;
    to_py(py, &analysis::return_map(&g.inner, &x, v).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (g, n, states, budget=1 << 20))]
fn is_irreducible<'py>(py: Python<'py>, g: &PyGraph, n: u32, states: Vec<u32>, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let x = config(&g.inner, n, states)?;
    to_py(py, &analysis::is_irreducible(&g.inner, &x, budget).map_err(err)?)
}

/// `kind` is `high_degree_tree` (on `tree`, default star(n)),
/// `k3_three_states` or `n7_star_search`.
#[pyfunction]
#[pyo3(signature = (kind, n=4, q=2, tree=None))]
fn counterexample<'py>(
    py: Python<'py>,
    kind: &str,
    n: u32,
    q: u32,
    tree: Option<&PyGraph>,
) -> PyResult<Bound<'py, PyAny>> {
    let ce = match kind {
        "high_degree_tree" => {
            let t = match tree {
                Some(t) => t.inner.clone(),
                None => graph::Graph::star(n as usize).map_err(err)?,
            };
            analysis::high_degree_tree(&t, n)
        }
        "k3_three_states" => analysis::k3_three_states(q),
        "n7_star_search" => py.detach(analysis::n7_star_search),
        other => return Err(PyValueError::new_err(format!("unknown counterexample `{other}`"))),
    }
    .map_err(err)?;
    to_py(py, &ce)
}

/// One seeded noisy run until synchrony or `cap` steps.
#[pyfunction]
#[pyo3(signature = (g, n, states, p, seed, cap=100_000, mode="edge_reception"))]
#[allow(clippy::too_many_arguments)]
fn mc_run<'py>(
    py: Python<'py>,
    g: &PyGraph,
    n: u32,
    states: Vec<u32>,
    p: f64,
    seed: u64,
    cap: u64,
    mode: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let x = config(&g.inner, n, states)?;
    let model = noise(&g.inner, p, mode)?;
    to_py(py, &stochastic::mc_run(&g.inner, &x, &model, seed, cap).map_err(err)?)
}

/// Summary of `runs` seeded runs; also carries `fraction_absorbed`.
#[pyfunction]
#[pyo3(signature = (g, n, states, p, runs, base_seed=0, cap=100_000, mode="edge_reception"))]
#[allow(clippy::too_many_arguments)]
fn mc_ensemble<'py>(
    py: Python<'py>,
    g: &PyGraph,
    n: u32,
    states: Vec<u32>,
    p: f64,
    runs: u64,
    base_seed: u64,
    cap: u64,
    mode: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let x = config(&g.inner, n, states)?;
    let model = noise(&g.inner, p, mode)?;
    let r = py.detach(|| stochastic::mc_ensemble(&g.inner, &x, &model, runs, base_seed, cap)).map_err(err)?;
    let out = to_py(py, &r)?;
    out.cast::<PyDict>()?.set_item("fraction_absorbed", r.fraction_absorbed())?;
    Ok(out)
}

/// Exact absorbing chain; `expected_absorption` is keyed by packed
/// configuration (as strings).
#[pyfunction]
#[pyo3(signature = (g, n, p, mode="edge_reception"))]
fn chain<'py>(py: Python<'py>, g: &PyGraph, n: u32, p: f64, mode: &str) -> PyResult<Bound<'py, PyAny>> {
    let model = noise(&g.inner, p, mode)?;
    let r = py.detach(|| stochastic::build_and_analyze_chain(&g.inner, n, &model)).map_err(err)?;
    to_py(py, &r)
}

/// Packed code of a configuration, as used for chain keys.
#[pyfunction]
fn pack(n: u32, states: Vec<u32>) -> PyResult<u64> {
    Configuration::new(n, states)
        .map_err(err)?
        .pack()
        .ok_or_else(|| PyValueError::new_err("configuration does not fit in 64 bits"))
}

#[pymodule]
fn firefly(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(step, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(width, m)?)?;
    m.add_function(wrap_pyfunction!(blinking_state, m)?)?;
    m.add_function(wrap_pyfunction!(is_n_synchronizing, m)?)?;
    m.add_function(wrap_pyfunction!(max_sync_time_path, m)?)?;
    m.add_function(wrap_pyfunction!(verify_tree_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(return_map, m)?)?;
    m.add_function(wrap_pyfunction!(is_irreducible, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(mc_run, m)?)?;
    m.add_function(wrap_pyfunction!(mc_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(chain, m)?)?;
    m.add_function(wrap_pyfunction!(pack, m)?)?;
    Ok(())
}
