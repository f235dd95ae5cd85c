//! Python bindings: the `pyuso` module.
//!
//! Vertices and outmaps cross the boundary as sorted lists of 1-based
//! dimensions; rationals as `"n/d"` strings.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use uso_core::linalg::format_fraction;
use uso_core::random_facet::stats_to_csv;
use uso_core::{DimSet, Error, Family};

create_exception!(pyuso, NotRealizableError, PyValueError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NotRealizable(w) => NotRealizableError::new_err((w.to_string(), w.to_json())),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn dimset(n: usize, dims: Vec<usize>) -> PyResult<DimSet> {
    if let Some(&d) = dims.iter().find(|&&d| d == 0 || d > n) {
        return Err(py_err(Error::BadDimension { dim: d, n }));
    }
    Ok(DimSet::from_dims(dims))
}

/// A directed acyclic influence graph on dimensions `1..=n`.
#[pyclass(name = "InfluenceGraph", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGraph(uso_core::InfluenceGraph);

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        uso_core::InfluenceGraph::new(n, edges).map(PyGraph).map_err(py_err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        serde_json::from_str(s).map(PyGraph).map_err(json_err)
    }

    /// A benchmark family: "loops", "path", "star" or "broken-chain".
    #[staticmethod]
    fn family(name: &str, n: usize) -> PyResult<Self> {
        let f: Family = name.parse().map_err(py_err)?;
        f.graph(n).map(PyGraph).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn is_transitive(&self) -> bool {
        self.0.is_transitive()
    }

    fn transitive_closure(&self) -> Self {
        PyGraph(self.0.transitive_closure())
    }

    /// `None` if realizable, else `(kind, (x, y, z))`.
    fn find_forbidden(&self) -> Option<(String, (usize, usize, usize))> {
        uso_core::find_forbidden(&self.0).map(|w| {
            let [x, y, z] = w.vertices;
            (format!("{:?}", w.kind), (x, y, z))
        })
    }

    /// Parent list of the branching whose closure this is, or `None`.
    fn branching(&self) -> Option<Vec<Option<usize>>> {
        uso_core::is_branching_closure(&self.0).map(|b| b.parents().to_vec())
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn to_dot(&self) -> String {
        self.0.to_dot()
    }

    fn __repr__(&self) -> String {
        format!("InfluenceGraph({})", self.0.to_json())
    }
}

/// A cube orientation given by its table of outmaps.
#[pyclass(name = "Orientation", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyOrientation(uso_core::Orientation);

#[pymethods]
impl PyOrientation {
    /// `outmaps[v]` for `v` in bitmask order, each a list of dimensions.
    #[new]
    fn new(n: usize, outmaps: Vec<Vec<usize>>) -> PyResult<Self> {
        let sets = outmaps
            .into_iter()
            .map(|dims| dimset(n, dims))
            .collect::<PyResult<Vec<_>>>()?;
        uso_core::Orientation::new(n, sets).map(PyOrientation).map_err(py_err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        serde_json::from_str(s).map(PyOrientation).map_err(json_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn outmap(&self, vertex: Vec<usize>) -> PyResult<Vec<usize>> {
        Ok(self.0.outmap(dimset(self.0.n(), vertex)?).to_vec())
    }

    fn outmaps(&self) -> Vec<Vec<usize>> {
        self.0.outmaps().iter().map(|s| s.to_vec()).collect()
    }

    fn is_uso(&self) -> PyResult<bool> {
        uso_core::is_uso(&self.0).map_err(py_err)
    }

    fn global_sink(&self) -> PyResult<Vec<usize>> {
        uso_core::global_sink(&self.0).map(DimSet::to_vec).map_err(py_err)
    }

    fn influence_graph(&self) -> PyResult<PyGraph> {
        uso_core::extract_influence_graph(&self.0).map(PyGraph).map_err(py_err)
    }

    fn canonicalize(&self) -> PyResult<Self> {
        uso_core::canonicalize(&self.0).map(PyOrientation).map_err(py_err)
    }

    fn flip_facet(&self, d: usize, upper: bool) -> PyResult<Self> {
        uso_core::flip_facet(&self.0, d, upper).map(PyOrientation).map_err(py_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn __repr__(&self) -> String {
        format!("Orientation({})", self.0.to_json())
    }
}

#[pyfunction]
fn build_matousek(g: &PyGraph) -> PyOrientation {
    PyOrientation(uso_core::build_matousek(&g.0))
}

/// Synthesizes and verifies an exact P-LCP realization.
///
/// Returns a dict with `extension` (JSON text), `M`, `q` (fraction strings)
/// and `verified`. Raises `NotRealizableError` with the witness otherwise.
#[pyfunction]
fn realize<'py>(py: Python<'py>, g: &PyGraph) -> PyResult<Bound<'py, PyDict>> {
    let r = uso_core::realize(&g.0).map_err(py_err)?;
    let fractions = |row: &[uso_core::Rational]| -> Vec<String> { row.iter().map(format_fraction).collect() };
    let m: Vec<Vec<String>> = (0..r.instance.n()).map(|i| fractions(r.instance.m().row(i))).collect();
    let out = PyDict::new(py);
    out.set_item("extension", r.extension.to_json())?;
    out.set_item("M", m)?;
    out.set_item("q", fractions(r.instance.q()))?;
    out.set_item("verified", r.verify(&g.0).map_err(py_err)?)?;
    Ok(out)
}

/// One Random Facet run: `(sink, evaluations, recursion_depth)`.
#[pyfunction]
fn random_facet(o: &PyOrientation, start: Vec<usize>, seed: u64) -> PyResult<(Vec<usize>, u64, usize)> {
    let start = dimset(o.0.n(), start)?;
    let r = uso_core::random_facet(&o.0, start, seed).map_err(py_err)?;
    Ok((r.sink.to_vec(), r.evaluations, r.recursion_depth))
}

/// Benchmark CSV for a family over the given dimensions.
#[pyfunction]
fn bench_csv(family: &str, ns: Vec<usize>, trials: u64, seed: u64) -> PyResult<String> {
    let f: Family = family.parse().map_err(py_err)?;
    let stats = uso_core::run_trials(f, &ns, trials, seed).map_err(py_err)?;
    Ok(stats_to_csv(&stats))
}

#[pymodule]
fn pyuso(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("NotRealizableError", m.py().get_type::<NotRealizableError>())?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyOrientation>()?;
    m.add_function(wrap_pyfunction!(build_matousek, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(random_facet, m)?)?;
    m.add_function(wrap_pyfunction!(bench_csv, m)?)?;
    Ok(())
}
