//! Python bindings for chartsay.
//!
//! Structured results (audit reports, evaluation metrics) cross the boundary
//! as JSON strings so the Python side can `json.loads` them without a
//! parallel class hierarchy; text helpers return plain strings.

// pyo3 0.22 macro expansion trips this lint on every `PyResult` return.
#![allow(clippy::useless_conversion)]

use std::collections::BTreeMap;

use chartsay::audit::{
    aggregate_stats, audit_screen, evaluate_corpus, read_labels, AuditReport, ScreenAudit,
    DEFAULT_PROXIMITY_PX,
};
use chartsay::cli::{CliConfig, EvalReport};
use chartsay::descriptors::{self, RainBands};
use chartsay::focus::{simulate as simulate_focus, DescriptorRegistry};
use chartsay::text;
use chartsay::{ChartData, DescriptorConfig};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json(value: &impl serde::Serialize) -> PyResult<String> {
    serde_json::to_string(value).map_err(value_error)
}

fn config(
    max_read_entries: usize,
    half_tolerance: f64,
    flat_epsilon: f64,
    repaired_rain_bands: bool,
) -> PyResult<CliConfig> {
    let cfg = CliConfig {
        max_read_entries,
        half_tolerance,
        flat_epsilon,
        repaired_rain_bands,
        ..CliConfig::default()
    };
    cfg.validate().map_err(value_error)?;
    Ok(cfg)
}

fn bands(repaired: bool) -> RainBands {
    if repaired {
        RainBands::Repaired
    } else {
        RainBands::Original
    }
}

/// A parsed UI hierarchy dump.
#[pyclass(name = "Hierarchy", module = "chartsay_py", frozen)]
struct PyHierarchy {
    inner: chartsay::Hierarchy,
}

#[pymethods]
impl PyHierarchy {
    #[new]
    fn new(xml: &str) -> PyResult<Self> {
        chartsay::parse_dump(xml)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Hierarchy(<{} nodes>)", self.inner.len())
    }

    /// Canonical XML serialization; parsing it yields an equal hierarchy.
    fn to_xml(&self) -> String {
        self.inner.to_canonical_xml()
    }

    /// Resource ids of every node, in preorder, skipping empty ones.
    fn resource_ids(&self) -> Vec<String> {
        self.inner
            .nodes()
            .into_iter()
            .filter(|n| !n.resource_id.is_empty())
            .map(|n| n.resource_id.clone())
            .collect()
    }

    /// Audit this screen and return the JSON report.
    #[pyo3(signature = (file = "screen.xml", proximity_px = DEFAULT_PROXIMITY_PX))]
    fn audit(&self, file: &str, proximity_px: i32) -> PyResult<String> {
        let audit = audit_screen(file, &self.inner, proximity_px);
        to_json(&AuditReport::new(&[audit], Vec::new()))
    }

    /// Screen-reader transcript as `(node_path, source, spoken_text)` tuples.
    #[pyo3(signature = (registry_json = "{}", *, max_read_entries = 7, half_tolerance = 0.05, flat_epsilon = 0.0, repaired_rain_bands = false))]
    fn simulate(
        &self,
        registry_json: &str,
        max_read_entries: usize,
        half_tolerance: f64,
        flat_epsilon: f64,
        repaired_rain_bands: bool,
    ) -> PyResult<Vec<(String, String, String)>> {
        let cfg = config(
            max_read_entries,
            half_tolerance,
            flat_epsilon,
            repaired_rain_bands,
        )?;
        let registry = DescriptorRegistry::from_json(registry_json, &cfg.chart_settings())
            .map_err(value_error)?;
        let transcript = simulate_focus(&self.inner, &registry).map_err(value_error)?;
        Ok(transcript
            .into_iter()
            .map(|u| {
                (
                    u.path.to_string(),
                    u.source.tag().to_string(),
                    u.spoken_text,
                )
            })
            .collect())
    }
}

/// Describe a chart given as `{"type": ..., "data": {...}}` JSON.
#[pyfunction]
#[pyo3(signature = (chart_json, *, max_read_entries = 7, half_tolerance = 0.05, flat_epsilon = 0.0, repaired_rain_bands = false))]
fn describe(
    chart_json: &str,
    max_read_entries: usize,
    half_tolerance: f64,
    flat_epsilon: f64,
    repaired_rain_bands: bool,
) -> PyResult<String> {
    let cfg = config(
        max_read_entries,
        half_tolerance,
        flat_epsilon,
        repaired_rain_bands,
    )?;
    let data = ChartData::from_json(chart_json).map_err(value_error)?;
    let descriptor = data.build(&cfg.chart_settings()).map_err(value_error)?;
    Ok(descriptor.describe())
}

/// Audit a single dump given as XML text; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (xml, file = "screen.xml", proximity_px = DEFAULT_PROXIMITY_PX))]
fn audit(xml: &str, file: &str, proximity_px: i32) -> PyResult<String> {
    PyHierarchy::new(xml)?.audit(file, proximity_px)
}

/// Evaluate detection against labels. `dumps` maps file name to XML text;
/// `labels_csv` uses the `file,has_chart,chart_type,accessible` header.
#[pyfunction]
#[pyo3(signature = (dumps, labels_csv, proximity_px = DEFAULT_PROXIMITY_PX))]
fn evaluate(
    dumps: BTreeMap<String, String>,
    labels_csv: &str,
    proximity_px: i32,
) -> PyResult<String> {
    let audits = dumps
        .iter()
        .map(|(file, xml)| {
            chartsay::parse_dump(xml)
                .map(|h| audit_screen(file, &h, proximity_px))
                .map_err(|e| value_error(format!("{file}: {e}")))
        })
        .collect::<PyResult<Vec<ScreenAudit>>>()?;
    let labels = read_labels(labels_csv.as_bytes()).map_err(value_error)?;
    let metrics = evaluate_corpus(&audits, &labels).map_err(value_error)?;
    to_json(&EvalReport {
        metrics,
        aggregate: aggregate_stats(&audits),
    })
}

/// Hierarchical phrase for a proportion in `[0, 1]`.
#[pyfunction]
#[pyo3(signature = (p, half_tolerance = 0.05))]
fn phrase_proportion(p: f64, half_tolerance: f64) -> PyResult<String> {
    let cfg = DescriptorConfig {
        half_tolerance,
        ..DescriptorConfig::default()
    };
    cfg.validate().map_err(value_error)?;
    text::phrase_proportion(p, &cfg).map_err(value_error)
}

#[pyfunction]
fn join_list(items: Vec<String>) -> PyResult<String> {
    text::join_list(&items).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (value, places = 2))]
fn format_value(value: f64, places: usize) -> PyResult<String> {
    text::format_value(value, places).map_err(value_error)
}

/// Trend of a series by its endpoints: "upwards", "downwards" or "sideways".
#[pyfunction]
#[pyo3(signature = (values, flat_epsilon = 0.0))]
fn trend(values: Vec<f64>, flat_epsilon: f64) -> PyResult<&'static str> {
    text::detect_trend(&values, flat_epsilon)
        .map(text::Trend::as_phrase)
        .map_err(value_error)
}

#[pyfunction]
fn beaufort_phrase(speed: f64) -> PyResult<&'static str> {
    text::beaufort_phrase(speed).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (mm, repaired = false))]
fn rain_phrase(mm: f64, repaired: bool) -> PyResult<String> {
    descriptors::rain_phrase_with(mm, bands(repaired)).map_err(value_error)
}

#[pyfunction]
fn day_label(epoch_millis: i64) -> PyResult<String> {
    descriptors::day_label(epoch_millis).map_err(value_error)
}

#[pyfunction]
fn stamp_label(epoch_millis: i64) -> PyResult<String> {
    descriptors::stamp_label(epoch_millis).map_err(value_error)
}

#[pymodule]
fn chartsay_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHierarchy>()?;
    m.add_function(wrap_pyfunction!(describe, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(phrase_proportion, m)?)?;
    m.add_function(wrap_pyfunction!(join_list, m)?)?;
    m.add_function(wrap_pyfunction!(format_value, m)?)?;
    m.add_function(wrap_pyfunction!(trend, m)?)?;
    m.add_function(wrap_pyfunction!(beaufort_phrase, m)?)?;
    m.add_function(wrap_pyfunction!(rain_phrase, m)?)?;
    m.add_function(wrap_pyfunction!(day_label, m)?)?;
    m.add_function(wrap_pyfunction!(stamp_label, m)?)?;
    m.add("PLACEHOLDER_TEXT", text::PLACEHOLDER_TEXT)?;
    Ok(())
}
