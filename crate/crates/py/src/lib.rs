//! Python bindings: the catalog, the analysis/verification pipelines, and
//! direct point queries on a metric. Reports cross the boundary as the same
//! JSON the command-line tool emits in machine format, so the two front
//! ends stay byte-compatible.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use curvlab::catalog;
use curvlab::curvature::{Depth, PointCurvature};
use curvlab::metricfile::MetricFile;
use curvlab::report::{self, RunConfig, Subject};
use curvlab::{parse_expr, Point};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn run_config(seed: u64, points: usize) -> RunConfig {
    RunConfig {
        seed,
        points,
        seed_source: "python".into(),
        tolerance_source: "default".into(),
        ..RunConfig::default()
    }
}

fn load_subject(target: &str) -> PyResult<Subject> {
    if let Some(name) = target.strip_prefix("catalog:") {
        let entry = catalog::entry(name).map_err(value_err)?;
        Ok(Subject::from_entry(&entry))
    } else {
        let raw = std::fs::read_to_string(target)
            .map_err(|e| value_err(format!("cannot read '{target}': {e}")))?;
        let file = MetricFile::parse(&raw).map_err(value_err)?;
        Ok(Subject::from_file(&file, target, &raw))
    }
}

/// Names of the built-in reference charts.
#[pyfunction]
fn catalog_names() -> Vec<String> {
    catalog::catalog().iter().map(|e| e.name.to_string()).collect()
}

/// Targets accepted by `verify`.
#[pyfunction]
fn verification_targets() -> Vec<String> {
    report::VERIFY_TARGETS.iter().map(|s| s.to_string()).collect()
}

/// Run the full seeded sweep on `catalog:NAME` or a definition file path
/// and return the machine-format report as a JSON string.
#[pyfunction]
#[pyo3(signature = (target, seed = 0, points = 50))]
fn analyze(target: &str, seed: u64, points: usize) -> PyResult<String> {
    let subject = load_subject(target)?;
    let report = report::analyze(&subject, &run_config(seed, points)).map_err(value_err)?;
    Ok(report.render_machine())
}

/// Run one named verification suite and return its JSON report.
#[pyfunction]
#[pyo3(signature = (target, seed = 0, points = 50))]
fn verify(target: &str, seed: u64, points: usize) -> PyResult<String> {
    let report = report::verify_target(target, &run_config(seed, points)).map_err(value_err)?;
    Ok(report.render_machine())
}

/// Evaluate one scalar expression in the definition-file grammar.
#[pyfunction]
fn eval_expr(text: &str, coords: Vec<String>, at: Vec<f64>) -> PyResult<f64> {
    if coords.len() != at.len() {
        return Err(value_err("coordinate list and evaluation point have different lengths"));
    }
    let expr = parse_expr(text, &coords).map_err(value_err)?;
    expr.eval_value(&at).map_err(value_err)
}

/// A coordinate metric with whatever auxiliary structure its definition
/// carries, exposing point queries and the sweep pipeline.
#[pyclass]
struct Metric {
    subject: Subject,
}

impl Metric {
    fn curvature_at(&self, point: &[f64]) -> PyResult<PointCurvature> {
        let p = Point(point.to_vec());
        PointCurvature::compute(&self.subject.metric, &p, Depth::Curvature).map_err(value_err)
    }

    fn square(&self, values: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
        let n = self.subject.metric.dim();
        (0..n).map(|i| (0..n).map(|j| values(i, j)).collect()).collect()
    }
}

#[pymethods]
impl Metric {
    /// Load a built-in chart by name.
    #[staticmethod]
    fn from_catalog(name: &str) -> PyResult<Metric> {
        let entry = catalog::entry(name).map_err(value_err)?;
        Ok(Metric { subject: Subject::from_entry(&entry) })
    }

    /// Parse a definition-file body given as a string.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Metric> {
        let file = MetricFile::parse(text).map_err(value_err)?;
        Ok(Metric { subject: Subject::from_file(&file, "<python>", text) })
    }

    /// Read and parse a definition file.
    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Metric> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| value_err(format!("cannot read '{path}': {e}")))?;
        let file = MetricFile::parse(&raw).map_err(value_err)?;
        Ok(Metric { subject: Subject::from_file(&file, path, &raw) })
    }

    #[getter]
    fn name(&self) -> String {
        self.subject.label.clone()
    }

    #[getter]
    fn kind(&self) -> String {
        self.subject.kind.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.subject.metric.dim()
    }

    #[getter]
    fn coords(&self) -> Vec<String> {
        self.subject.metric.coords().to_vec()
    }

    #[getter]
    fn signature(&self) -> String {
        self.subject
            .metric
            .signature()
            .iter()
            .map(|s| if *s < 0 { '-' } else { '+' })
            .collect()
    }

    /// Metric components g_ij at a point.
    fn components_at(&self, point: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        let m = self.subject.metric.values_at(&Point(point)).map_err(value_err)?;
        Ok(self.square(|i, j| m[(i, j)]))
    }

    /// Scalar curvature at a point.
    fn scalar_curvature(&self, point: Vec<f64>) -> PyResult<f64> {
        Ok(self.curvature_at(&point)?.scalar)
    }

    /// Ricci tensor (both slots down) at a point.
    fn ricci(&self, point: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        let c = self.curvature_at(&point)?;
        Ok(self.square(|i, j| c.ricci.get(&[i, j])))
    }

    /// Largest Weyl component at a point; None below dimension four.
    fn weyl_norm(&self, point: Vec<f64>) -> PyResult<Option<f64>> {
        Ok(self.curvature_at(&point)?.weyl04.map(|w| w.max_abs()))
    }

    /// Run the seeded sweep on this metric and return the JSON report.
    #[pyo3(signature = (seed = 0, points = 25))]
    fn analyze(&self, seed: u64, points: usize) -> PyResult<String> {
        let report =
            report::analyze(&self.subject, &run_config(seed, points)).map_err(value_err)?;
        Ok(report.render_machine())
    }

    fn __repr__(&self) -> String {
        format!(
            "Metric(name='{}', kind='{}', dim={})",
            self.subject.label,
            self.subject.kind,
            self.subject.metric.dim()
        )
    }
}

#[pymodule]
fn curvlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Metric>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(verification_targets, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(eval_expr, m)?)?;
    Ok(())
}
