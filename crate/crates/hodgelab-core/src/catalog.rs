//! Built-in model catalog and default metric sets.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::basis::BasisElement;
use crate::error::EngineError;
use crate::form::Form;
use crate::metric::Metric;
use crate::model::{LieModel, Model, TorusModel};
use crate::scalar::{GaussianRational, RingKind, Scalar};

fn mono(n: u8, i: Vec<u8>, j: Vec<u8>, c: i64) -> Form {
    Form::monomial(n, BasisElement::new(i, j), Scalar::Rational(GaussianRational::from_int(c)))
}

/// Complex torus: abelian invariant complex, all differentials vanish.
pub fn torus(n: u8) -> Model {
    let name = match n {
        2 => "torus2",
        3 => "torus3",
        _ => "torus",
    };
    let d: Vec<Form> = (0..n).map(|_| Form::zero(n, RingKind::Rational)).collect();
    Model::Lie(LieModel::new(name, n, d))
}

/// Iwasawa manifold invariant complex: `d e^3 = -e^1 /\ e^2`.
pub fn iwasawa() -> Model {
    let n = 3;
    let d = vec![
        Form::zero(n, RingKind::Rational),
        Form::zero(n, RingKind::Rational),
        mono(n, vec![1, 2], vec![], -1),
    ];
    Model::Lie(LieModel::new("iwasawa", n, d))
}

/// Invariant complex of the semisimple group SL(2,C):
/// `d e^1 = 2 e^1/\e^2`, `d e^2 = -e^1/\e^3`, `d e^3 = 2 e^2/\e^3`
/// (coframe dual to the standard (X, H, Y) basis).
pub fn sl2c() -> Model {
    let n = 3;
    let d = vec![
        mono(n, vec![1, 2], vec![], 2),
        mono(n, vec![1, 3], vec![], -1),
        mono(n, vec![2, 3], vec![], 2),
    ];
    Model::Lie(LieModel::new("sl2c", n, d))
}

/// Fourier-truncated flat torus, complex dimension 2.
pub fn fourier_torus2() -> Model {
    Model::Torus(TorusModel::new("ftorus2", 2, 3))
}

pub fn all_lie_models() -> Vec<Model> {
    vec![torus(2), torus(3), iwasawa(), sl2c()]
}

pub fn model_by_name(name: &str) -> Result<Model, EngineError> {
    match name {
        "torus2" => Ok(torus(2)),
        "torus3" => Ok(torus(3)),
        "iwasawa" => Ok(iwasawa()),
        "sl2c" => Ok(sl2c()),
        "ftorus2" => Ok(fourier_torus2()),
        other => Err(EngineError::Config(alloc::format!("unknown catalog model {other:?}"))),
    }
}

pub fn catalog_names() -> Vec<&'static str> {
    vec!["torus2", "torus3", "iwasawa", "sl2c", "ftorus2"]
}

/// Three exact diagonal metrics per model dimension. Every diagonal metric
/// is balanced on each catalog Lie model, which the analysis layer verifies
/// rather than assumes.
pub fn default_metrics(n: u8) -> Vec<Metric> {
    let ones: Vec<(i64, i64)> = (0..n).map(|_| (1, 1)).collect();
    let ramp: Vec<(i64, i64)> = (0..n).map(|k| (k as i64 + 1, 1)).collect();
    let mixed: Vec<(i64, i64)> = (0..n)
        .map(|k| match k % 3 {
            0 => (1, 2),
            1 => (3, 1),
            _ => (5, 7),
        })
        .collect();
    vec![
        Metric::diagonal("id", n, &ones).unwrap(),
        Metric::diagonal("ramp", n, &ramp).unwrap(),
        Metric::diagonal("mixed", n, &mixed).unwrap(),
    ]
}

pub fn metric_by_name(n: u8, name: &str) -> Result<Metric, EngineError> {
    default_metrics(n)
        .into_iter()
        .find(|m| m.name == name)
        .ok_or_else(|| EngineError::Config(alloc::format!("unknown metric {name:?}")))
}

pub fn default_metric_names() -> Vec<String> {
    vec!["id".into(), "ramp".into(), "mixed".into()]
}
