//! Serializable report shapes and table rendering. Field order and map
//! ordering are fixed so identical runs emit byte-identical JSON.

use serde::Serialize;

use hodgelab_core::analysis::{ClassDecomposition, MetricClassification, SignCell};
use hodgelab_core::identity::{IdentityReport, SuiteReport};
use hodgelab_core::model::ValidationReport;

#[derive(Serialize)]
pub struct ValidationJson {
    pub model: String,
    pub ok: bool,
    pub checks: Vec<CheckJson>,
}

#[derive(Serialize)]
pub struct CheckJson {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl From<&ValidationReport> for ValidationJson {
    fn from(r: &ValidationReport) -> Self {
        ValidationJson {
            model: r.model.clone(),
            ok: r.ok,
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson { name: c.name.clone(), ok: c.ok, witness: c.witness.clone() })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct CohomologyJson {
    pub model: String,
    pub de_rham: Vec<DimEntry>,
    pub dolbeault: Vec<BidimEntry>,
    pub bott_chern: Vec<BidimEntry>,
    pub aeppli: Vec<BidimEntry>,
}

#[derive(Serialize)]
pub struct DimEntry {
    pub degree: usize,
    pub dim: usize,
}

#[derive(Serialize)]
pub struct BidimEntry {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
}

pub fn cohomology_table(report: &CohomologyJson) -> String {
    let mut out = String::new();
    out.push_str(&format!("model: {}\n", report.model));
    out.push_str("de Rham:    ");
    for e in &report.de_rham {
        out.push_str(&format!("H^{}={} ", e.degree, e.dim));
    }
    out.push('\n');
    for (label, entries) in [
        ("Dolbeault: ", &report.dolbeault),
        ("Bott-Chern:", &report.bott_chern),
        ("Aeppli:    ", &report.aeppli),
    ] {
        out.push_str(label);
        out.push(' ');
        for e in entries {
            out.push_str(&format!("({},{})={} ", e.p, e.q, e.dim));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
pub struct ClassificationJson {
    pub kahler: bool,
    pub balanced: bool,
    pub gauduchon: bool,
    pub degenerate_balanced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate_witness: Option<String>,
    pub aeppli_exact_power: bool,
}

impl From<&MetricClassification> for ClassificationJson {
    fn from(c: &MetricClassification) -> Self {
        ClassificationJson {
            kahler: c.kahler,
            balanced: c.balanced,
            gauduchon: c.gauduchon,
            degenerate_balanced: c.degenerate_balanced,
            degenerate_witness: c.degenerate_witness.as_ref().map(|w| w.serialize()),
            aeppli_exact_power: c.aeppli_exact_power,
        }
    }
}

#[derive(Serialize)]
pub struct DecompositionJson {
    pub lambda: String,
    pub lambda_integral_route: String,
    pub routes_agree: bool,
    pub omega_h: String,
    pub omega_h_norm_sq: String,
    pub prim_rep: String,
}

impl From<&ClassDecomposition> for DecompositionJson {
    fn from(d: &ClassDecomposition) -> Self {
        DecompositionJson {
            lambda: d.lambda_coord.to_string(),
            lambda_integral_route: d.lambda_integral.to_string(),
            routes_agree: d.lambda_coord == d.lambda_integral,
            omega_h: d.omega_h.serialize(),
            omega_h_norm_sq: d.omega_h_norm_sq.to_string(),
            prim_rep: d.prim_rep.serialize(),
        }
    }
}

#[derive(Serialize)]
pub struct AnalyzeJson {
    pub model: String,
    pub metric: String,
    pub flavor: String,
    pub classification: ClassificationJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperplane: Option<HyperplaneJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition_cell: Option<String>,
}

#[derive(Serialize)]
pub struct HyperplaneJson {
    pub space_dim: usize,
    pub codim: usize,
}

pub fn sign_cell_str(cell: SignCell) -> String {
    cell.to_string()
}

#[derive(Serialize)]
pub struct IdentityReportJson {
    pub case: String,
    pub model: String,
    pub metric: String,
    pub trials: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub exact_path: bool,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl From<&IdentityReport> for IdentityReportJson {
    fn from(r: &IdentityReport) -> Self {
        let status = if r.skipped.is_some() {
            "skip"
        } else if r.failures == 0 {
            "pass"
        } else {
            "fail"
        };
        IdentityReportJson {
            case: r.case_id.clone(),
            model: r.model.clone(),
            metric: r.metric.clone(),
            trials: r.trials,
            failures: r.failures,
            max_residual: r.max_residual,
            exact_path: r.exact_path,
            status: status.to_string(),
            skipped: r.skipped.clone(),
            first_failure: r.first_failure.clone(),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct SuiteJson {
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub passed: bool,
    pub model_validation_failures: Vec<ModelFailureJson>,
    pub cases: Vec<IdentityReportJson>,
}

#[derive(Serialize)]
pub struct ModelFailureJson {
    pub model: String,
    pub reason: String,
}

impl From<&SuiteReport> for SuiteJson {
    fn from(r: &SuiteReport) -> Self {
        SuiteJson {
            seed: r.seed,
            trials: r.trials,
            tolerance: r.tolerance,
            passed: r.passed,
            model_validation_failures: r
                .model_validation_failures
                .iter()
                .map(|(m, reason)| ModelFailureJson { model: m.clone(), reason: reason.clone() })
                .collect(),
            cases: r.reports.iter().map(IdentityReportJson::from).collect(),
        }
    }
}

pub fn suite_table(report: &SuiteJson) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "seed {}  trials {}  tolerance {:e}\n",
        report.seed, report.trials, report.tolerance
    ));
    for f in &report.model_validation_failures {
        out.push_str(&format!("INVALID  {:10} {}\n", f.model, f.reason));
    }
    out.push_str(&format!(
        "{:<6} {:<10} {:<8} {:>6} {:>8} {:>12}  status\n",
        "case", "model", "metric", "trials", "failures", "max residual"
    ));
    for c in &report.cases {
        out.push_str(&format!(
            "{:<6} {:<10} {:<8} {:>6} {:>8} {:>12.3e}  {}{}\n",
            c.case,
            c.model,
            c.metric,
            c.trials,
            c.failures,
            c.max_residual,
            c.status,
            c.skipped.as_deref().map(|s| format!(" ({s})")).unwrap_or_default()
        ));
    }
    out.push_str(if report.passed { "RESULT: pass\n" } else { "RESULT: fail\n" });
    out
}

pub fn validation_table(report: &ValidationJson) -> String {
    let mut out = String::new();
    out.push_str(&format!("model: {}\n", report.model));
    for c in &report.checks {
        out.push_str(&format!(
            "  [{}] {}{}\n",
            if c.ok { "ok" } else { "FAIL" },
            c.name,
            c.witness.as_deref().map(|w| format!(" -- {w}")).unwrap_or_default()
        ));
    }
    out.push_str(if report.ok { "VALID\n" } else { "INVALID\n" });
    out
}
