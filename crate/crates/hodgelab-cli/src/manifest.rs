//! Model manifest files.
//!
//! A manifest is a JSON object:
//!
//! ```json
//! {
//!   "name": "iwasawa",
//!   "n": 3,
//!   "d": { "e3": [["-1", "12|"]] },
//!   "metrics": {
//!     "id": ["1", "1", "1"],
//!     "generic": { "diag": ["1/2", "3", "5/7"] },
//!     "skew": { "hermitian": [["2,0", "0,1", "0"], ["0,-1", "2,0", "0"], ["0", "0", "1,0"]] }
//!   }
//! }
//! ```
//!
//! Differentials are listed for the holomorphic coframe generators `e1..en`
//! as `[coefficient, "I|J"]` pairs with exact rational coefficients
//! (`"re"` or `"re,im"`, each an integer or `p/q`); the conjugate coframe
//! differentials follow by conjugation. Diagonal metrics stay on the exact
//! path; Hermitian matrices are reduced to the identity diagonal by a
//! triangular (float) change of coframe at load time.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;

use hodgelab_core::basis::BasisElement;
use hodgelab_core::form::Form;
use hodgelab_core::metric::{reduce_hermitian, Metric};
use hodgelab_core::model::{LieModel, Model};
use hodgelab_core::scalar::{parse_gaussian, parse_rational, RingKind, Scalar};

#[derive(Deserialize)]
struct RawManifest {
    name: String,
    n: u8,
    #[serde(default)]
    d: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    metrics: BTreeMap<String, RawMetric>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMetric {
    Diagonal(Vec<String>),
    Tagged(TaggedMetric),
}

#[derive(Deserialize)]
struct TaggedMetric {
    #[serde(default)]
    diag: Option<Vec<String>>,
    #[serde(default)]
    hermitian: Option<Vec<Vec<String>>>,
}

/// A named metric entry: exact diagonal, or a Hermitian matrix that will
/// be reduced at use time.
#[derive(Clone)]
pub enum MetricSpec {
    Diagonal(Metric),
    Hermitian(Vec<Vec<Complex64>>),
}

pub struct Manifest {
    pub model: Model,
    pub metrics: Vec<(String, MetricSpec)>,
}

impl Manifest {
    /// Resolves a named metric to a concrete `(model, metric)` pair; a
    /// Hermitian entry rewrites the model through the reducing coframe.
    pub fn resolve(&self, name: &str) -> Result<(Model, Metric), String> {
        let spec = self
            .metrics
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| format!("metric {name:?} is not defined for this model"))?;
        match spec {
            MetricSpec::Diagonal(m) => Ok((self.model.clone(), m.clone())),
            MetricSpec::Hermitian(h) => {
                let lie = self
                    .model
                    .as_lie()
                    .ok_or_else(|| "hermitian metrics apply to Lie models".to_string())?;
                reduce_hermitian(lie, h).map_err(|e| e.to_string())
            }
        }
    }

    pub fn metric_names(&self) -> Vec<String> {
        self.metrics.iter().map(|(n, _)| n.clone()).collect()
    }
}

pub fn parse_manifest(text: &str) -> Result<Manifest, String> {
    let raw: RawManifest = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    if raw.n == 0 || raw.n > 9 {
        return Err("complex dimension must be between 1 and 9".to_string());
    }
    let mut gens: Vec<Form> = (0..raw.n).map(|_| Form::zero(raw.n, RingKind::Rational)).collect();
    for (key, entries) in &raw.d {
        let idx = key
            .strip_prefix('e')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&k| k >= 1 && k <= raw.n as usize)
            .ok_or_else(|| {
                format!("differential key {key:?} must be e1..e{} (conjugates are derived)", raw.n)
            })?;
        let mut form = Form::zero(raw.n, RingKind::Rational);
        for (coeff, elt) in entries {
            let c = parse_gaussian(coeff).map_err(|e| e.to_string())?;
            let b = BasisElement::parse(elt, raw.n).map_err(|e| e.to_string())?;
            form.add_to(b, &Scalar::Rational(c));
        }
        gens[idx - 1] = form;
    }
    let model = Model::Lie(LieModel::new(&raw.name, raw.n, gens));

    let mut metrics = Vec::new();
    for (name, raw_metric) in &raw.metrics {
        let spec = match raw_metric {
            RawMetric::Diagonal(entries) => MetricSpec::Diagonal(parse_diag(name, raw.n, entries)?),
            RawMetric::Tagged(t) => match (&t.diag, &t.hermitian) {
                (Some(entries), None) => MetricSpec::Diagonal(parse_diag(name, raw.n, entries)?),
                (None, Some(rows)) => MetricSpec::Hermitian(parse_hermitian(raw.n, rows)?),
                _ => return Err(format!("metric {name:?} must set exactly one of diag/hermitian")),
            },
        };
        metrics.push((name.clone(), spec));
    }
    if metrics.is_empty() {
        metrics.push(("id".to_string(), MetricSpec::Diagonal(Metric::identity(raw.n))));
    }
    Ok(Manifest { model, metrics })
}

fn parse_diag(name: &str, n: u8, entries: &[String]) -> Result<Metric, String> {
    if entries.len() != n as usize {
        return Err(format!("metric {name:?} needs {n} diagonal entries"));
    }
    let mut diag = Vec::new();
    for e in entries {
        diag.push(parse_rational(e).map_err(|e| e.to_string())?);
    }
    Metric::new(name, n, diag).map_err(|e| e.to_string())
}

fn parse_hermitian(n: u8, rows: &[Vec<String>]) -> Result<Vec<Vec<Complex64>>, String> {
    if rows.len() != n as usize || rows.iter().any(|r| r.len() != n as usize) {
        return Err(format!("hermitian matrix must be {n} x {n}"));
    }
    let mut out = Vec::new();
    for row in rows {
        let mut r = Vec::new();
        for v in row {
            let g = parse_gaussian(v).map_err(|e| e.to_string())?;
            r.push(g.to_complex());
        }
        out.push(r);
    }
    Ok(out)
}

/// Loads a model by catalog name or manifest path; catalog names win.
pub fn load_model_source(source: &str) -> Result<Manifest, String> {
    if hodgelab_core::catalog::catalog_names().contains(&source) {
        let model = hodgelab_core::catalog::model_by_name(source).map_err(|e| e.to_string())?;
        let metrics = hodgelab_core::catalog::default_metrics(model.n())
            .into_iter()
            .map(|m| (m.name.clone(), MetricSpec::Diagonal(m)))
            .collect();
        return Ok(Manifest { model, metrics });
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| format!("cannot read manifest {source:?}: {e}"))?;
    parse_manifest(&text)
}
