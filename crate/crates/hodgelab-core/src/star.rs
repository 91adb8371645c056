//! Hodge star operator.
//!
//! The star is complex-linear and defined by the metric pairing relation
//!
//! ```text
//! u /\ star(conj(v)) = <u, v> * omega_n        (pointwise)
//! ```
//!
//! which determines it on every basis monomial. The closed formula on
//! primitive forms is a theorem about this definition and is exercised by
//! the identity suite, not assumed here.

use num_rational::BigRational;
use num_traits::Zero;

use crate::basis::{self, BasisElement};
use crate::error::EngineError;
use crate::form::Form;
use crate::metric::Metric;
use crate::scalar::GaussianRational;

/// Star of a single basis monomial: the complementary monomial and its
/// exact coefficient.
///
/// For `g = e^K /\ ebar^L`, write `v = e^L /\ ebar^K`, so that
/// `conj(v) = sigma g` with `sigma = (-1)^{|K||L|}`. The pairing relation
/// with `u = v` forces `star g` to be supported on `e^{L^c} /\ ebar^{K^c}`
/// with coefficient `sigma * w(g) * i^{n^2} * (a_1..a_n) / kappa`, where
/// `w` is the metric weight of the monomial and `kappa` is the Koszul sign
/// merging `v` with the complement into the top element.
fn star_basis(metric: &Metric, elt: &BasisElement) -> (BasisElement, GaussianRational) {
    let n = metric.n;
    let partner = elt.star_partner(n);
    let v = BasisElement::new(elt.j.clone(), elt.i.clone());
    let (_, kappa) = basis::wedge_basis(&v, &partner)
        .expect("complementary monomials merge into the top element");
    let sigma = basis::conj_sign(elt);
    let mut coeff: BigRational = metric.weight(elt) * metric.volume_factor();
    if (sigma as i32) * (kappa as i32) < 0 {
        coeff = -coeff;
    }
    let n2 = (n as i64) * (n as i64);
    let unit = GaussianRational::i_pow(n2);
    let x = unit.mul(&GaussianRational::new(coeff, BigRational::zero()));
    (partner, x)
}

/// Hodge star on arbitrary forms, componentwise over basis monomials.
/// Maps bidegree `(p, q)` to `(n-q, n-p)`.
pub fn hodge_star(metric: &Metric, u: &Form) -> Result<Form, EngineError> {
    if u.n != metric.n {
        return Err(EngineError::MetricMismatch("dimension mismatch in star".into()));
    }
    let mut out = Form::zero(u.n, u.ring);
    for (elt, c) in u.iter() {
        let (partner, x) = star_basis(metric, elt);
        out.add_to(partner, &c.mul_rat(&x));
    }
    Ok(out)
}

/// Inverse star: `(-1)^k star` on `k`-forms (the real dimension is even).
pub fn hodge_star_inv(metric: &Metric, u: &Form) -> Result<Form, EngineError> {
    let mut out = Form::zero(u.n, u.ring);
    for k in 0..=(2 * u.n as usize) {
        let part = u.degree_component(k);
        if part.is_zero() {
            continue;
        }
        let mut s = hodge_star(metric, &part)?;
        if k % 2 == 1 {
            s = s.neg();
        }
        out = out.add(&s)?;
    }
    Ok(out)
}
