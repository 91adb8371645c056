//! Command-line front door: model validation, cohomology tables, metric
//! analysis, the identity verification suite, and operator-matrix export.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or
//! configuration error, 3 invalid model.

mod manifest;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hodgelab_core::analysis::{self, DecompFlavor};
use hodgelab_core::basis;
use hodgelab_core::cohomology::{compute_space, Flavor};
use hodgelab_core::form::Form;
use hodgelab_core::identity::{self, SuiteConfig};
use hodgelab_core::metric::Metric;
use hodgelab_core::model::Model;
use hodgelab_core::operators::OperatorKind;

use manifest::{load_model_source, Manifest};
use report::*;

#[derive(Parser)]
#[command(name = "hodgelab", version, about = "Exact Hermitian geometry engine on finite models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Model management
    Models {
        #[command(subcommand)]
        cmd: ModelsCmd,
    },
    /// Cohomology dimension table (de Rham, Dolbeault, Bott-Chern, Aeppli)
    Cohomology {
        /// catalog name or manifest path
        #[arg(long)]
        model: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Metric classification, primitive hyperplane, Lefschetz-type
    /// decomposition and sign partition of a class
    AnalyzeMetric {
        #[arg(long)]
        model: String,
        /// metric name from the catalog or manifest
        #[arg(long, default_value = "id")]
        metric: String,
        /// decomposition flavor: de Rham degree 2 or Bott-Chern (1,1)
        #[arg(long, default_value = "dr", value_parser = ["dr", "bc"])]
        flavor: String,
        /// class representative: path to a serialized form, or an inline
        /// serialization with ';' separating lines (defaults to the
        /// harmonic part of omega)
        #[arg(long)]
        class: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the identity verification suite
    Verify {
        /// comma-separated case ids (default: all)
        #[arg(long)]
        cases: Option<String>,
        /// comma-separated catalog names or manifest paths
        /// (default: torus2,torus3,iwasawa,sl2c,ftorus2)
        #[arg(long)]
        models: Option<String>,
        /// comma-separated metric names (default: all metrics of each model)
        #[arg(long)]
        metrics: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Fixture export
    Export {
        #[command(subcommand)]
        cmd: ExportCmd,
    },
}

#[derive(Subcommand)]
enum ModelsCmd {
    /// Check the structural invariants of a model
    Validate {
        /// catalog name or manifest path
        source: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// List built-in catalog models
    List,
}

#[derive(Subcommand)]
enum ExportCmd {
    /// Operator matrix as CSV (rows/columns over the canonical basis)
    OperatorMatrix {
        #[arg(long)]
        model: String,
        #[arg(long, default_value = "id")]
        metric: String,
        /// operator kind: d, del, delbar, d_star, del_star, delbar_star,
        /// tau, tau_star, laplacian_d, laplacian_del, laplacian_delbar,
        /// laplacian_tau, laplacian_tau_prime, d_h[re,im],
        /// d_h_star[re,im], laplacian_h[re,im]
        #[arg(long)]
        operator: String,
        /// restrict the domain to one total degree (default: full basis)
        #[arg(long)]
        degree: Option<usize>,
        /// output path (default: stdout)
        #[arg(long)]
        out: Option<String>,
    },
}

fn fail(code: u8, msg: &str) -> ExitCode {
    let _ = writeln!(std::io::stderr(), "error: {msg}");
    ExitCode::from(code)
}

fn emit_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable report"));
}

fn resolve_pair(source: &str, metric_name: &str) -> Result<(Manifest, Model, Metric), String> {
    let manifest = load_model_source(source)?;
    let (model, metric) = manifest.resolve(metric_name)?;
    Ok((manifest, model, metric))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Models { cmd } => match cmd {
            ModelsCmd::List => {
                for name in hodgelab_core::catalog::catalog_names() {
                    println!("{name}");
                }
                ExitCode::SUCCESS
            }
            ModelsCmd::Validate { source, format } => {
                let manifest = match load_model_source(&source) {
                    Ok(m) => m,
                    Err(e) => return fail(2, &e),
                };
                let validation = manifest.model.validate();
                let json = ValidationJson::from(&validation);
                match format {
                    Format::Json => emit_json(&json),
                    Format::Table => print!("{}", validation_table(&json)),
                }
                if validation.ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(3)
                }
            }
        },
        Cmd::Cohomology { model, format } => {
            let manifest = match load_model_source(&model) {
                Ok(m) => m,
                Err(e) => return fail(2, &e),
            };
            let m = &manifest.model;
            if !m.validate().ok {
                return fail(3, &format!("model {} fails validation", m.name()));
            }
            let n = m.n() as usize;
            let mut de_rham = Vec::new();
            for k in 0..=2 * n {
                match compute_space(m, Flavor::DeRham(k)) {
                    Ok(s) => de_rham.push(DimEntry { degree: k, dim: s.dim() }),
                    Err(e) => return fail(2, &e.to_string()),
                }
            }
            let mut dolbeault = Vec::new();
            let mut bott_chern = Vec::new();
            let mut aeppli = Vec::new();
            for p in 0..=n {
                for q in 0..=n {
                    let dol = compute_space(m, Flavor::Dolbeault(p, q));
                    let bc = compute_space(m, Flavor::BottChern(p, q));
                    let ae = compute_space(m, Flavor::Aeppli(p, q));
                    match (dol, bc, ae) {
                        (Ok(d), Ok(b), Ok(a)) => {
                            dolbeault.push(BidimEntry { p, q, dim: d.dim() });
                            bott_chern.push(BidimEntry { p, q, dim: b.dim() });
                            aeppli.push(BidimEntry { p, q, dim: a.dim() });
                        }
                        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                            return fail(2, &e.to_string())
                        }
                    }
                }
            }
            let json = CohomologyJson {
                model: m.name().to_string(),
                de_rham,
                dolbeault,
                bott_chern,
                aeppli,
            };
            match format {
                Format::Json => emit_json(&json),
                Format::Table => print!("{}", cohomology_table(&json)),
            }
            ExitCode::SUCCESS
        }
        Cmd::AnalyzeMetric { model, metric, flavor, class, format } => {
            let (_, m, met) = match resolve_pair(&model, &metric) {
                Ok(v) => v,
                Err(e) => return fail(2, &e),
            };
            if !m.validate().ok {
                return fail(3, &format!("model {} fails validation", m.name()));
            }
            let dec_flavor = if flavor == "bc" { DecompFlavor::Bc11 } else { DecompFlavor::DrH2 };
            let classification = match analysis::classify_metric(&m, &met) {
                Ok(c) => c,
                Err(e) => return fail(2, &e.to_string()),
            };
            let hyperplane = analysis::primitive_hyperplane(&m, &met, dec_flavor)
                .ok()
                .map(|hp| HyperplaneJson { space_dim: hp.space_dim, codim: hp.codim });
            // the class to decompose: given, or the harmonic part of omega
            let alpha: Result<Form, String> = match &class {
                Some(spec) => {
                    let text = if std::path::Path::new(spec).exists() {
                        std::fs::read_to_string(spec).map_err(|e| e.to_string())
                    } else {
                        Ok(spec.replace(';', "\n"))
                    };
                    text.and_then(|t| Form::parse(m.n(), &t).map_err(|e| e.to_string()))
                }
                None => analysis::omega_harmonic_part(&m, &met, dec_flavor, None)
                    .map_err(|e| e.to_string()),
            };
            let (decomposition, dec_err, cell) = match alpha {
                Ok(alpha) => {
                    match analysis::lefschetz_h2_decompose(&m, &met, &alpha, dec_flavor, None) {
                        Ok(dec) => {
                            let cell = analysis::sign_partition(&m, &met, &alpha, dec_flavor)
                                .ok()
                                .map(sign_cell_str);
                            (Some(DecompositionJson::from(&dec)), None, cell)
                        }
                        Err(e) => (None, Some(e.to_string()), None),
                    }
                }
                Err(e) => (None, Some(e), None),
            };
            let json = AnalyzeJson {
                model: m.name().to_string(),
                metric: met.name.clone(),
                flavor: flavor.clone(),
                classification: ClassificationJson::from(&classification),
                hyperplane,
                decomposition,
                decomposition_error: dec_err,
                partition_cell: cell,
            };
            emit_json(&json);
            let _ = format;
            ExitCode::SUCCESS
        }
        Cmd::Verify { cases, models, metrics, trials, seed, tolerance, format } => {
            let case_list: Vec<String> = match cases {
                Some(c) => c.split(',').map(|s| s.trim().to_string()).collect(),
                None => identity::case_catalog().iter().map(|c| c.id.to_string()).collect(),
            };
            let model_list: Vec<String> = match models {
                Some(m) => m.split(',').map(|s| s.trim().to_string()).collect(),
                None => hodgelab_core::catalog::catalog_names()
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            };
            let metric_filter: Option<Vec<String>> =
                metrics.map(|m| m.split(',').map(|s| s.trim().to_string()).collect());
            let mut grid: Vec<(Model, Vec<Metric>)> = Vec::new();
            for source in &model_list {
                let manifest = match load_model_source(source) {
                    Ok(m) => m,
                    Err(e) => return fail(2, &e),
                };
                let names = match &metric_filter {
                    Some(f) => f.clone(),
                    None => manifest.metric_names(),
                };
                // Hermitian metrics rewrite the model, so each resolved
                // pair with a changed coframe gets its own grid entry
                let mut exact_metrics: Vec<Metric> = Vec::new();
                for name in &names {
                    match manifest.resolve(name) {
                        Ok((m2, metric)) => {
                            if m2.name() == manifest.model.name() {
                                exact_metrics.push(metric);
                            } else {
                                grid.push((m2, vec![metric]));
                            }
                        }
                        Err(e) => return fail(2, &e),
                    }
                }
                if !exact_metrics.is_empty() {
                    grid.push((manifest.model.clone(), exact_metrics));
                }
            }
            let config = SuiteConfig { cases: case_list, trials, seed, tolerance };
            let suite = match identity::run_suite(&config, &grid) {
                Ok(s) => s,
                Err(e) => return fail(2, &e.to_string()),
            };
            let json = SuiteJson::from(&suite);
            match format {
                Format::Json => emit_json(&json),
                Format::Table => print!("{}", suite_table(&json)),
            }
            if !suite.model_validation_failures.is_empty() {
                ExitCode::from(3)
            } else if suite.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Cmd::Export { cmd } => match cmd {
            ExportCmd::OperatorMatrix { model, metric, operator, degree, out } => {
                let (_, m, met) = match resolve_pair(&model, &metric) {
                    Ok(v) => v,
                    Err(e) => return fail(2, &e),
                };
                let kind = match OperatorKind::parse(&operator) {
                    Ok(k) => k,
                    Err(e) => return fail(2, &e.to_string()),
                };
                let ops = match hodgelab_core::operators::Ops::new(&m, &met) {
                    Ok(o) => o,
                    Err(e) => return fail(2, &e.to_string()),
                };
                let basis_in = match degree {
                    Some(k) => basis::basis_of_degree(m.n(), k),
                    None => basis::full_basis(m.n()),
                };
                let basis_out = basis::full_basis(m.n());
                let matrix = match ops.matrix_on(&kind, &basis_in, &basis_out) {
                    Ok(mt) => mt,
                    Err(e) => return fail(2, &e.to_string()),
                };
                let mut csv = String::new();
                csv.push_str("basis");
                for b in &basis_in {
                    csv.push(',');
                    csv.push_str(&b.serialize());
                }
                csv.push('\n');
                for r in 0..matrix.rows {
                    csv.push_str(&basis_out[r].serialize());
                    for c in 0..matrix.cols {
                        csv.push_str(",\"");
                        csv.push_str(&matrix.get(r, c).to_string());
                        csv.push('"');
                    }
                    csv.push('\n');
                }
                match out {
                    Some(path) => {
                        if let Err(e) = std::fs::write(&path, csv) {
                            return fail(2, &format!("cannot write {path:?}: {e}"));
                        }
                    }
                    None => print!("{csv}"),
                }
                ExitCode::SUCCESS
            }
        },
    }
}
