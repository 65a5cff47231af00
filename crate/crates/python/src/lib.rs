//! Python bindings.
//!
//! Events cross the boundary as lists of outcome labels; interval tables come
//! back as lists of `(labels, lower, upper)` tuples.

use credal_fusion::fusion::{self, ConditionalEnsemble};
use credal_fusion::model::{self, RunOptions};
use credal_fusion::{Event, Frame, IntervalTable};
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

type Row = (Vec<String>, f64, f64);

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn frame(labels: Vec<String>) -> PyResult<Frame> {
    Frame::new(labels).map_err(value_err)
}

fn events(frame: &Frame, events: Option<Vec<Vec<String>>>) -> PyResult<Vec<Event>> {
    match events {
        None => Ok(Event::all_by_size(frame.size())),
        Some(list) => list
            .iter()
            .map(|labels| {
                frame
                    .event(labels)
                    .ok_or_else(|| PyKeyError::new_err(format!("unknown label in {labels:?}")))
            })
            .collect(),
    }
}

fn labels_of(frame: &Frame, event: Event) -> Vec<String> {
    event.indices().map(|i| frame.labels()[i].clone()).collect()
}

fn rows(frame: &Frame, table: &IntervalTable) -> Vec<Row> {
    table
        .iter()
        .map(|(e, iv)| (labels_of(frame, *e), iv.lower, iv.upper))
        .collect()
}

/// A closed convex set of probability distributions.
#[pyclass(name = "CredalSet", module = "credal_fusion_py")]
struct PyCredalSet {
    inner: credal_fusion::CredalSet,
}

#[pymethods]
impl PyCredalSet {
    #[new]
    #[pyo3(signature = (labels, extremes, contexts = None))]
    fn new(
        labels: Vec<String>,
        extremes: Vec<Vec<f64>>,
        contexts: Option<Vec<String>>,
    ) -> PyResult<Self> {
        let set = credal_fusion::CredalSet::new(frame(labels)?, extremes).map_err(value_err)?;
        Ok(PyCredalSet {
            inner: set.with_contexts(contexts.unwrap_or_default()),
        })
    }

    #[staticmethod]
    fn vacuous(labels: Vec<String>) -> PyResult<Self> {
        Ok(PyCredalSet {
            inner: credal_fusion::CredalSet::vacuous(frame(labels)?),
        })
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.frame().labels().to_vec()
    }

    #[getter]
    fn extremes(&self) -> Vec<Vec<f64>> {
        self.inner.extremes().to_vec()
    }

    #[getter]
    fn contexts(&self) -> Vec<String> {
        self.inner.contexts().iter().cloned().collect()
    }

    fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    fn contains(&self, p: Vec<f64>) -> PyResult<bool> {
        self.inner.contains(&p).map_err(value_err)
    }

    /// Lower and upper probability of each event (all events by default).
    #[pyo3(signature = (events = None))]
    fn envelope(&self, events: Option<Vec<Vec<String>>>) -> PyResult<Vec<Row>> {
        let f = self.inner.frame();
        let list = self::events(f, events)?;
        let env = self.inner.envelope().map_err(value_err)?;
        Ok(rows(f, &env.table(&list)))
    }

    fn maximal_family(&self) -> PyResult<Self> {
        let env = self.inner.envelope().map_err(value_err)?;
        Ok(PyCredalSet {
            inner: env.maximal_family().map_err(value_err)?,
        })
    }

    #[pyo3(signature = (other, assume_no_interaction = false))]
    fn conjunction(&self, other: &PyCredalSet, assume_no_interaction: bool) -> PyResult<Self> {
        Ok(PyCredalSet {
            inner: self
                .inner
                .conjunction(&other.inner, assume_no_interaction)
                .map_err(value_err)?,
        })
    }

    fn disjunction(&self, other: &PyCredalSet) -> PyResult<Self> {
        Ok(PyCredalSet {
            inner: self.inner.disjunction(&other.inner).map_err(value_err)?,
        })
    }

    fn independent_product(&self, other: &PyCredalSet) -> PyResult<Self> {
        Ok(PyCredalSet {
            inner: self
                .inner
                .independent_product(&other.inner)
                .map_err(value_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "CredalSet(labels={:?}, extremes={})",
            self.inner.frame().labels(),
            self.inner.extremes().len()
        )
    }
}

/// A convex set of likelihood vectors describing one observation.
#[pyclass(name = "EvidenceSet", module = "credal_fusion_py")]
struct PyEvidenceSet {
    inner: credal_fusion::EvidenceSet,
}

#[pymethods]
impl PyEvidenceSet {
    #[new]
    fn new(labels: Vec<String>, extremes: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(PyEvidenceSet {
            inner: credal_fusion::EvidenceSet::new(frame(labels)?, extremes).map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn precise(labels: Vec<String>, likelihood: Vec<f64>) -> PyResult<Self> {
        Ok(PyEvidenceSet {
            inner: credal_fusion::EvidenceSet::precise(frame(labels)?, likelihood)
                .map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn interval(labels: Vec<String>, lower: Vec<f64>, upper: Vec<f64>) -> PyResult<Self> {
        Ok(PyEvidenceSet {
            inner: credal_fusion::EvidenceSet::interval(frame(labels)?, lower, upper)
                .map_err(value_err)?,
        })
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.frame().labels().to_vec()
    }

    #[getter]
    fn extremes(&self) -> Vec<Vec<f64>> {
        self.inner.extremes().to_vec()
    }

    fn possibility(&self) -> Vec<f64> {
        self.inner.possibility().values().to_vec()
    }

    #[pyo3(signature = (events = None))]
    fn consistency_table(&self, events: Option<Vec<Vec<String>>>) -> PyResult<Vec<Row>> {
        let f = self.inner.frame();
        let list = self::events(f, events)?;
        let table = self
            .inner
            .possibility()
            .consistency_table()
            .map_err(value_err)?;
        Ok(rows(f, &table.table(&list)))
    }

    fn equivalent(&self, other: &PyEvidenceSet) -> PyResult<bool> {
        self.inner.equivalent(&other.inner).map_err(value_err)
    }

    fn conjunction(&self, other: &PyEvidenceSet) -> PyResult<Self> {
        Ok(PyEvidenceSet {
            inner: self.inner.conjunction(&other.inner).map_err(value_err)?,
        })
    }

    fn disjunction(&self, other: &PyEvidenceSet) -> PyResult<Self> {
        Ok(PyEvidenceSet {
            inner: self.inner.disjunction(&other.inner).map_err(value_err)?,
        })
    }

    /// Both observations hold; `mode` is "independent" or "frechet".
    #[pyo3(signature = (other, mode = "independent"))]
    fn observe_and(&self, other: &PyEvidenceSet, mode: &str) -> PyResult<Self> {
        let inner = match mode {
            "independent" => self.inner.observe_and_independent(&other.inner),
            "frechet" => self.inner.observe_and_frechet(&other.inner),
            _ => return Err(PyValueError::new_err(format!("unknown mode '{mode}'"))),
        };
        Ok(PyEvidenceSet {
            inner: inner.map_err(value_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "EvidenceSet(labels={:?}, extremes={})",
            self.inner.frame().labels(),
            self.inner.extremes().len()
        )
    }
}

/// Normalized combination functions with their possibilities.
#[pyclass(name = "Ensemble", module = "credal_fusion_py")]
struct PyEnsemble {
    inner: ConditionalEnsemble,
}

#[pymethods]
impl PyEnsemble {
    /// `(conditional distribution, possibility)` for each member.
    fn members(&self) -> Vec<(Vec<f64>, f64)> {
        let norm = self.inner.normalizer();
        self.inner
            .members()
            .iter()
            .map(|m| (m.conditional.values().to_vec(), m.weight / norm))
            .collect()
    }

    #[getter]
    fn normalizer(&self) -> f64 {
        self.inner.normalizer()
    }

    /// Conditional intervals; `method` is "choquet" or "upperlower".
    #[pyo3(signature = (events = None, method = "choquet"))]
    fn intervals(&self, events: Option<Vec<Vec<String>>>, method: &str) -> PyResult<Vec<Row>> {
        let f = self.inner.frame();
        let list = self::events(f, events)?;
        let table = match method {
            "choquet" => self.inner.conditional_intervals(&list).map_err(value_err)?,
            "upperlower" => self.inner.upper_lower_conditioning(&list),
            _ => return Err(PyValueError::new_err(format!("unknown method '{method}'"))),
        };
        Ok(rows(f, &table))
    }
}

/// Extremes of `{p × l}` for a prior and an evidence set.
#[pyfunction]
fn combine(prior: &PyCredalSet, evidence: &PyEvidenceSet) -> PyResult<Vec<Vec<f64>>> {
    let h = fusion::combine(&prior.inner, &evidence.inner).map_err(value_err)?;
    Ok(h.extremes().to_vec())
}

#[pyfunction]
fn ensemble(prior: &PyCredalSet, evidence: &PyEvidenceSet) -> PyResult<PyEnsemble> {
    let inner = fusion::combine(&prior.inner, &evidence.inner)
        .and_then(|h| h.ensemble())
        .map_err(value_err)?;
    Ok(PyEnsemble { inner })
}

/// Conditional intervals of every requested event given the evidence.
#[pyfunction]
#[pyo3(signature = (prior, evidence, events = None, method = "choquet"))]
fn condition(
    prior: &PyCredalSet,
    evidence: &PyEvidenceSet,
    events: Option<Vec<Vec<String>>>,
    method: &str,
) -> PyResult<Vec<Row>> {
    ensemble(prior, evidence)?.intervals(events, method)
}

/// Validate a JSON model document; raises `ValueError` with its error code.
#[pyfunction]
fn check_model(text: &str) -> PyResult<()> {
    model::parse_model(text)
        .map(|_| ())
        .map_err(|e| PyValueError::new_err(format!("{}: {e}", e.code())))
}

/// Run a JSON model document and return the rendered report.
#[pyfunction]
#[pyo3(signature = (text, seed = 0, decimals = 4, pretty = false))]
fn run_model(text: &str, seed: u64, decimals: usize, pretty: bool) -> PyResult<String> {
    let parsed = model::parse_model(text)
        .map_err(|e| PyValueError::new_err(format!("{}: {e}", e.code())))?;
    let options = RunOptions {
        seed,
        decimals,
        pretty,
    };
    let report = model::run(&parsed, &options)
        .map_err(|e| PyValueError::new_err(format!("{}: {e}", e.code())))?;
    Ok(report.render(&options))
}

#[pymodule]
fn credal_fusion_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCredalSet>()?;
    m.add_class::<PyEvidenceSet>()?;
    m.add_class::<PyEnsemble>()?;
    m.add_function(wrap_pyfunction!(combine, m)?)?;
    m.add_function(wrap_pyfunction!(ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(condition, m)?)?;
    m.add_function(wrap_pyfunction!(check_model, m)?)?;
    m.add_function(wrap_pyfunction!(run_model, m)?)?;
    Ok(())
}
