//! Python module `ordeval`.
//!
//! Structured results (cells, evidence, ground truth) cross the boundary as
//! plain dicts and lists built from their JSON form.

use std::path::PathBuf;

use ordeval_core::report::{render_profile, render_ranking, ProfilePlotOptions, RankingPlotOptions};
use ordeval_core::ordeval::attribute_seed;
use ordeval_core::relieff::PivotCount;
use ordeval_core::{
    io, rank_attributes, AttributeScore, Code, IngestConfig, KanoClassification, KanoRules, OrdEvalParams,
    OrdinalDataset, OrdinalScale, ReinforcementProfile, ReliefFParams, SyntheticPopulationSpec,
};
use pyo3::exceptions::{PyIOError, PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyString};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn err(e: ordeval_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Accepts a JSON string or any object `json.dumps` can serialize.
fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = if obj.is_instance_of::<PyString>() {
        obj.extract()?
    } else {
        obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?
    };
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn scale(max: Code) -> PyResult<OrdinalScale> {
    OrdinalScale::new(max).map_err(err)
}

#[pyclass(name = "Dataset", module = "ordeval", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyDataset {
    inner: OrdinalDataset,
}

fn ingest_config(
    response: &str,
    scale_max: Option<Code>,
    missing: Vec<String>,
    ignore: Vec<String>,
) -> PyResult<IngestConfig> {
    let mut cfg = IngestConfig::new(response);
    cfg.missing_tokens = missing;
    cfg.ignore_columns = ignore;
    if let Some(s) = scale_max {
        cfg = cfg.with_default_scale(scale(s)?);
    }
    Ok(cfg)
}

#[pymethods]
impl PyDataset {
    /// Reads a CSV file. `scale` declares `1..scale` for every column; without it
    /// each column's scale is inferred from its largest value.
    #[staticmethod]
    #[pyo3(signature = (path, response, scale=None, missing=vec!["NA".to_string()], ignore=vec![]))]
    fn from_csv(
        path: PathBuf,
        response: &str,
        scale: Option<Code>,
        missing: Vec<String>,
        ignore: Vec<String>,
    ) -> PyResult<Self> {
        let file = std::fs::File::open(&path).map_err(|e| PyIOError::new_err(format!("{}: {e}", path.display())))?;
        let cfg = ingest_config(response, scale, missing, ignore)?;
        let (inner, _) = io::load_csv(file, &cfg).map_err(err)?;
        Ok(PyDataset { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (text, response, scale=None, missing=vec!["NA".to_string()], ignore=vec![]))]
    fn from_csv_string(
        text: &str,
        response: &str,
        scale: Option<Code>,
        missing: Vec<String>,
        ignore: Vec<String>,
    ) -> PyResult<Self> {
        let cfg = ingest_config(response, scale, missing, ignore)?;
        let (inner, _) = io::load_csv(text.as_bytes(), &cfg).map_err(err)?;
        Ok(PyDataset { inner })
    }

    /// `columns` maps attribute name to codes, `None` marking a missing answer.
    #[staticmethod]
    #[pyo3(signature = (columns, response, scale=7, response_name="satisfaction"))]
    fn from_columns(
        columns: &Bound<'_, PyDict>,
        response: Vec<Code>,
        scale: Code,
        response_name: &str,
    ) -> PyResult<Self> {
        let s = self::scale(scale)?;
        let mut names = Vec::new();
        let mut data = Vec::new();
        for (k, v) in columns.iter() {
            names.push(k.extract::<String>()?);
            data.push(v.extract::<Vec<Option<Code>>>()?);
        }
        let scales = vec![s.clone(); names.len()];
        let inner = OrdinalDataset::from_columns(names, scales, response_name, s, data, response).map_err(err)?;
        Ok(PyDataset { inner })
    }

    #[getter]
    fn n_rows(&self) -> usize {
        self.inner.n_rows()
    }

    #[getter]
    fn attributes(&self) -> Vec<String> {
        self.inner.attribute_names().to_vec()
    }

    #[getter]
    fn response_name(&self) -> String {
        self.inner.response_name().to_string()
    }

    #[getter]
    fn response(&self) -> Vec<Code> {
        self.inner.responses().to_vec()
    }

    fn column(&self, name: &str) -> PyResult<Vec<Option<Code>>> {
        let j = self
            .inner
            .attribute_index(name)
            .ok_or_else(|| PyKeyError::new_err(name.to_string()))?;
        Ok(self.inner.column(j))
    }

    fn to_csv(&self) -> PyResult<String> {
        io::to_csv_string(&self.inner).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.n_rows()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(rows={}, attributes={}, response={:?})",
            self.inner.n_rows(),
            self.inner.n_attributes(),
            self.inner.response_name()
        )
    }
}

#[pyclass(name = "Profile", module = "ordeval", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyProfile {
    inner: ReinforcementProfile,
}

#[pymethods]
impl PyProfile {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyProfile { inner })
    }

    #[getter]
    fn attribute(&self) -> String {
        self.inner.attribute.clone()
    }

    #[getter]
    fn base_rates<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.base_rates)
    }

    /// Endpoint cells as dicts, UP cells first.
    #[getter]
    fn cells<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.cells)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[pyo3(signature = (title=None))]
    fn svg(&self, title: Option<String>) -> String {
        let options = ProfilePlotOptions {
            title,
            ..Default::default()
        };
        render_profile(&self.inner, &options)
    }

    fn __repr__(&self) -> String {
        format!("Profile(attribute={:?})", self.inner.attribute)
    }
}

#[pyclass(name = "Classification", module = "ordeval", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyClassification {
    inner: KanoClassification,
}

#[pymethods]
impl PyClassification {
    #[getter]
    fn attribute(&self) -> String {
        self.inner.attribute.clone()
    }

    /// Category code, e.g. `MUST_BE` or `MIXED(MUST_BE, ONE_DIMENSIONAL)`.
    #[getter]
    fn code(&self) -> String {
        self.inner.category.code()
    }

    #[getter]
    fn phrase(&self) -> String {
        self.inner.category.phrase()
    }

    #[getter]
    fn components(&self) -> Vec<String> {
        self.inner.category.components().iter().map(|c| c.code().to_string()).collect()
    }

    #[getter]
    fn is_mixed(&self) -> bool {
        self.inner.category.is_mixed()
    }

    #[getter]
    fn notes(&self) -> String {
        self.inner.notes.clone()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Classification(attribute={:?}, code={:?})", self.inner.attribute, self.inner.category.code())
    }
}

fn score_list(py: Python<'_>, scores: &[AttributeScore]) -> PyResult<Vec<Py<PyAny>>> {
    scores.iter().map(|s| to_py(py, s).map(Bound::unbind)).collect()
}

/// ReliefF scores in rank order, one dict per attribute.
#[pyfunction]
#[pyo3(signature = (dataset, k=10, pivots=None, seed=0))]
fn relieff(py: Python<'_>, dataset: &PyDataset, k: usize, pivots: Option<usize>, seed: u64) -> PyResult<Vec<Py<PyAny>>> {
    let params = ReliefFParams {
        k_neighbors: k,
        pivots: pivots.map_or(PivotCount::All, PivotCount::Sample),
        seed,
        parallel: true,
    };
    let ds = &dataset.inner;
    let result = py
        .detach(|| ordeval_core::relieff_scores(ds, &params))
        .map_err(err)?;
    score_list(py, &result.ranking())
}

/// Reinforcement profiles for the named attributes, or all of them. A subset
/// gives the same profiles as the full run with the same seed.
#[pyfunction]
#[pyo3(signature = (dataset, attributes=None, context=None, bootstrap=200, alpha=0.05, min_support=5, seed=0, include_evaluated=false))]
#[allow(clippy::too_many_arguments)]
fn evaluate(
    py: Python<'_>,
    dataset: &PyDataset,
    attributes: Option<Vec<String>>,
    context: Option<usize>,
    bootstrap: usize,
    alpha: f64,
    min_support: usize,
    seed: u64,
    include_evaluated: bool,
) -> PyResult<Vec<PyProfile>> {
    let params = OrdEvalParams {
        context_size: context,
        bootstrap_replicates: bootstrap,
        alpha,
        min_support,
        seed,
        exclude_evaluated_attribute: !include_evaluated,
        parallel: true,
    };
    let ds = &dataset.inner;
    let profiles = match attributes {
        None => py.detach(|| ordeval_core::evaluate_all(ds, &params)).map_err(err)?,
        Some(names) => {
            let idx = names
                .iter()
                .map(|n| ds.attribute_index(n).ok_or_else(|| PyKeyError::new_err(n.clone())))
                .collect::<PyResult<Vec<_>>>()?;
            py.detach(|| {
                idx.iter()
                    .map(|&j| {
                        let p = OrdEvalParams {
                            seed: attribute_seed(seed, j),
                            ..params.clone()
                        };
                        ordeval_core::evaluate_attribute(ds, j, &p)
                    })
                    .collect::<ordeval_core::Result<Vec<_>>>()
            })
            .map_err(err)?
        }
    };
    Ok(profiles.into_iter().map(|inner| PyProfile { inner }).collect())
}

/// Kano category for a profile. `rules` overrides default thresholds and takes
/// a dict or JSON string with any subset of the rule fields.
#[pyfunction]
#[pyo3(signature = (profile, rules=None))]
fn classify(profile: &PyProfile, rules: Option<&Bound<'_, PyAny>>) -> PyResult<PyClassification> {
    let rules = match rules {
        None => KanoRules::default(),
        Some(obj) => {
            let mut base = serde_json::to_value(KanoRules::default()).expect("rules serialize");
            let patch: serde_json::Value = from_py(obj)?;
            let (Some(b), Some(p)) = (base.as_object_mut(), patch.as_object()) else {
                return Err(PyValueError::new_err("rules must be a mapping"));
            };
            for (k, v) in p {
                if !b.contains_key(k) {
                    return Err(PyKeyError::new_err(format!("unknown rule `{k}`")));
                }
                b.insert(k.clone(), v.clone());
            }
            serde_json::from_value(base).map_err(|e| PyValueError::new_err(e.to_string()))?
        }
    };
    Ok(PyClassification {
        inner: ordeval_core::classify(&profile.inner, &rules),
    })
}

/// Synthetic population from a spec (dict or JSON string). Returns the dataset
/// and its ground truth.
#[pyfunction]
fn simulate<'py>(py: Python<'py>, spec: &Bound<'py, PyAny>) -> PyResult<(PyDataset, Bound<'py, PyAny>)> {
    let spec: SyntheticPopulationSpec = from_py(spec)?;
    let truth = ordeval_core::ground_truth(&spec).map_err(err)?;
    let inner = ordeval_core::generate_population(&spec).map_err(err)?;
    Ok((PyDataset { inner }, to_py(py, &truth)?))
}

/// SVG bar chart of `(attribute, score)` pairs.
#[pyfunction]
#[pyo3(signature = (scores, title="ReliefF ranking".to_string()))]
fn ranking_svg(scores: Vec<(String, f64)>, title: String) -> String {
    let options = RankingPlotOptions {
        title,
        ..Default::default()
    };
    render_ranking(&rank_attributes(&scores), &options)
}

/// Plain-text report; all three inputs must cover the same attributes.
#[pyfunction]
fn text_report(
    profiles: Vec<PyProfile>,
    classifications: Vec<PyClassification>,
    scores: Vec<(String, f64)>,
) -> PyResult<String> {
    let p: Vec<_> = profiles.into_iter().map(|p| p.inner).collect();
    let c: Vec<_> = classifications.into_iter().map(|c| c.inner).collect();
    ordeval_core::report::render_text_report(&p, &c, &rank_attributes(&scores)).map_err(err)
}

#[pymodule]
fn ordeval(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PyProfile>()?;
    m.add_class::<PyClassification>()?;
    m.add_function(wrap_pyfunction!(relieff, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(ranking_svg, m)?)?;
    m.add_function(wrap_pyfunction!(text_report, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
