//! Lefschetz operator, its pointwise adjoint, primitivity, and the
//! Lefschetz decomposition into primitive components.

use alloc::format;
use alloc::vec::Vec;

use crate::basis;
use crate::error::EngineError;
use crate::form::Form;
use crate::linalg::{self, Matrix};
use crate::metric::Metric;
use crate::scalar::{RingKind, Scalar};
use crate::star::hodge_star;

/// `omega^r /\ u` (no factorial normalization).
pub fn lefschetz_l(metric: &Metric, u: &Form, r: usize) -> Result<Form, EngineError> {
    let mut out = u.clone();
    let omega = metric.omega(u.ring);
    for _ in 0..r {
        out = out.wedge(&omega)?;
    }
    Ok(out)
}

/// Pointwise adjoint of wedging by `gamma` with respect to the metric inner
/// product: on a pure-degree form `v`,
///
/// ```text
/// (gamma /\ .)^* v = (-1)^{m(g+1)} conj( star( gamma /\ star(conj v) ) )
/// ```
///
/// with `g = deg gamma` and `m = deg v - g`. Derived by moving `gamma`
/// through the pairing relation defining the star; applied componentwise
/// over total degrees.
pub fn wedge_adjoint(metric: &Metric, gamma: &Form, v: &Form) -> Result<Form, EngineError> {
    let g = gamma
        .pure_degree()
        .ok_or_else(|| EngineError::DegreeError("wedge adjoint needs pure-degree multiplier".into()))?;
    let mut out = Form::zero(v.n, v.ring);
    for k in 0..=(2 * v.n as usize) {
        let part = v.degree_component(k);
        if part.is_zero() {
            continue;
        }
        if k < g {
            continue;
        }
        let m = k - g;
        let inner = hodge_star(metric, &part.conjugate())?;
        let wedged = gamma.wedge(&inner)?;
        let mut res = hodge_star(metric, &wedged)?.conjugate();
        if (m * (g + 1)) % 2 == 1 {
            res = res.neg();
        }
        out = out.add(&res)?;
    }
    Ok(out)
}

/// The adjoint `Lambda` of the Lefschetz operator `omega /\ .`.
pub fn lambda(metric: &Metric, u: &Form) -> Result<Form, EngineError> {
    let omega = metric.omega(u.ring);
    wedge_adjoint(metric, &omega, u)
}

/// Primitivity of a pure-degree form `u` of degree `k <= n`: tests
/// `omega_{n-k+1} /\ u = 0` and checks it agrees with `Lambda u = 0`.
pub fn is_primitive(metric: &Metric, u: &Form) -> Result<bool, EngineError> {
    let n = metric.n as usize;
    let k = u
        .pure_degree()
        .ok_or_else(|| EngineError::DegreeError("primitivity needs a pure-degree form".into()))?;
    if k > n {
        return Err(EngineError::DegreeError(format!("degree {k} exceeds dimension {n}")));
    }
    // omega^{n-k+1} vanishes identically when n-k+1 > n, so 0-forms are
    // always primitive
    let by_wedge = if n - k + 1 > n {
        true
    } else {
        let power = metric.omega_power(u.ring, n - k + 1)?;
        power.wedge(u)?.is_zero()
    };
    let by_lambda = lambda(metric, u)?.is_zero();
    assert_eq!(
        by_wedge, by_lambda,
        "primitivity tests disagree: omega-power route {by_wedge}, Lambda route {by_lambda}"
    );
    Ok(by_wedge)
}

/// Lefschetz decomposition of a pure-degree form `u` of degree `k <= n`:
/// the unique primitive components `(u_0, u_1, .., u_l)` with
/// `u = sum_s omega^s /\ u_s`. Components are returned for every
/// `s = 0..=l` with `l = floor(k/2)`.
pub fn lefschetz_decompose(metric: &Metric, u: &Form) -> Result<Vec<Form>, EngineError> {
    let n = metric.n as usize;
    let k = u
        .pure_degree()
        .ok_or_else(|| EngineError::DegreeError("decomposition needs a pure-degree form".into()))?;
    if k > n {
        return Err(EngineError::DegreeError(format!(
            "decomposition above middle degree {k} > {n} is out of contract"
        )));
    }
    if u.ring == RingKind::Fourier {
        // constant-coefficient operation: act frequency by frequency
        let parts = u.split_frequencies();
        let l = k / 2;
        let mut acc: Vec<Vec<(Vec<i32>, Form)>> = alloc::vec![Vec::new(); l + 1];
        for (freq, f) in parts {
            let comps = lefschetz_decompose(metric, &f)?;
            for (s, c) in comps.into_iter().enumerate() {
                acc[s].push((freq.clone(), c));
            }
        }
        return Ok(acc.into_iter().map(|ps| Form::merge_frequencies(u.n as u8, &ps)).collect());
    }

    let l = k / 2;
    let target_basis = basis::basis_of_degree(u.n, k);
    // unknowns: coefficients of u_s over the degree-(k-2s) basis;
    // rows: reassembly in degree k, then primitivity of each u_s
    let mut col_blocks: Vec<(usize, Vec<basis::BasisElement>)> = Vec::new();
    for s in 0..=l {
        col_blocks.push((s, basis::basis_of_degree(u.n, k - 2 * s)));
    }
    let mut prim_bases: Vec<Vec<basis::BasisElement>> = Vec::new();
    for s in 0..=l {
        let deg = k - 2 * s;
        let prim_deg = if deg >= 2 { deg - 2 } else { usize::MAX };
        prim_bases.push(if prim_deg == usize::MAX {
            Vec::new()
        } else {
            basis::basis_of_degree(u.n, prim_deg)
        });
    }
    let total_cols: usize = col_blocks.iter().map(|(_, b)| b.len()).sum();
    let total_rows: usize = target_basis.len() + prim_bases.iter().map(|b| b.len()).sum::<usize>();
    let mut mat = Matrix::zero(total_rows, total_cols, u.ring);
    let mut col = 0;
    for (s, block) in &col_blocks {
        for elt in block {
            let e = Form::monomial(u.n, elt.clone(), Scalar::one(u.ring));
            let img = lefschetz_l(metric, &e, *s)?;
            let vec = linalg::form_to_vector(&target_basis, &img);
            for (r, v) in vec.into_iter().enumerate() {
                if !v.is_zero() {
                    mat.set(r, col, v);
                }
            }
            let lam = lambda(metric, &e)?;
            let mut row_off = target_basis.len();
            for (s2, pbasis) in prim_bases.iter().enumerate() {
                if s2 == *s && !pbasis.is_empty() {
                    let pvec = linalg::form_to_vector(pbasis, &lam);
                    for (r, v) in pvec.into_iter().enumerate() {
                        if !v.is_zero() {
                            mat.set(row_off + r, col, v);
                        }
                    }
                }
                row_off += pbasis.len();
            }
            col += 1;
        }
    }
    let mut rhs = alloc::vec![Scalar::zero(u.ring); total_rows];
    let uvec = linalg::form_to_vector(&target_basis, u);
    rhs[..target_basis.len()].clone_from_slice(&uvec);
    let sol = mat
        .solve(&rhs)
        .ok_or_else(|| EngineError::DegreeError("lefschetz decomposition solve failed".into()))?;
    let mut out = Vec::new();
    let mut off = 0;
    for (s, block) in &col_blocks {
        let _ = s;
        let f = linalg::vector_to_form(u.n, u.ring, block, &sol[off..off + block.len()]);
        off += block.len();
        out.push(f);
    }
    Ok(out)
}

/// Rank data of the pointwise Lefschetz map `omega^r /\ . : deg k -> deg k+2r`.
pub struct LefschetzRank {
    pub k: usize,
    pub r: usize,
    pub rank: usize,
    pub domain_dim: usize,
    pub target_dim: usize,
    pub injective: bool,
    pub bijective: bool,
}

pub fn lefschetz_rank(metric: &Metric, k: usize, r: usize) -> Result<LefschetzRank, EngineError> {
    let n = metric.n;
    let dom = basis::basis_of_degree(n, k);
    let tgt = basis::basis_of_degree(n, k + 2 * r);
    let mut cols = Vec::new();
    for elt in &dom {
        let e = Form::monomial(n, elt.clone(), Scalar::one(RingKind::Rational));
        let img = lefschetz_l(metric, &e, r)?;
        cols.push(linalg::form_to_vector(&tgt, &img));
    }
    let m = Matrix::from_columns(tgt.len(), RingKind::Rational, &cols);
    let rank = m.rank();
    Ok(LefschetzRank {
        k,
        r,
        rank,
        domain_dim: dom.len(),
        target_dim: tgt.len(),
        injective: rank == dom.len(),
        bijective: rank == dom.len() && rank == tgt.len(),
    })
}

/// Exact inverse of the bijective map `omega_{n-1} /\ . : deg 1 -> deg 2n-1`.
pub fn invert_top_lefschetz_on_1forms(
    metric: &Metric,
    psi: &Form,
) -> Result<Form, EngineError> {
    let n = metric.n;
    if psi.pure_degree() != Some(2 * n as usize - 1) && !psi.is_zero() {
        return Err(EngineError::DegreeError("expected a (2n-1)-form".into()));
    }
    if psi.ring == RingKind::Fourier {
        let parts = psi.split_frequencies();
        let mut solved = Vec::new();
        for (freq, f) in parts {
            solved.push((freq, invert_top_lefschetz_on_1forms(metric, &f)?));
        }
        return Ok(Form::merge_frequencies(n, &solved));
    }
    let dom = basis::basis_of_degree(n, 1);
    let tgt = basis::basis_of_degree(n, 2 * n as usize - 1);
    let wn1 = metric.omega_power(psi.ring, n as usize - 1)?;
    let mut cols = Vec::new();
    for elt in &dom {
        let e = Form::monomial(n, elt.clone(), Scalar::one(psi.ring));
        cols.push(linalg::form_to_vector(&tgt, &wn1.wedge(&e)?));
    }
    let m = Matrix::from_columns(tgt.len(), psi.ring, &cols);
    let sol = m
        .solve(&linalg::form_to_vector(&tgt, psi))
        .ok_or_else(|| EngineError::DegreeError("top Lefschetz inversion failed".into()))?;
    Ok(linalg::vector_to_form(n, psi.ring, &dom, &sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisElement;
    use crate::scalar::GaussianRational;
    use alloc::vec;

    fn rat1() -> Scalar {
        Scalar::Rational(GaussianRational::one())
    }

    #[test]
    fn lambda_of_omega_is_n() {
        for n in [2u8, 3] {
            let metric = Metric::diagonal(
                "d",
                n,
                &(0..n).map(|k| (k as i64 + 1, 1)).collect::<Vec<_>>(),
            )
            .unwrap();
            let omega = metric.omega(RingKind::Rational);
            let lam = lambda(&metric, &omega).unwrap();
            let expect = Form::from_scalar(n, Scalar::from_int(RingKind::Rational, n as i64));
            assert_eq!(lam, expect);
        }
    }

    #[test]
    fn one_forms_are_primitive_and_omega_is_not() {
        let metric = Metric::identity(2);
        let e1 = Form::monomial(2, BasisElement::new(vec![1], vec![]), rat1());
        assert!(is_primitive(&metric, &e1).unwrap());
        let omega = metric.omega(RingKind::Rational);
        assert!(!is_primitive(&metric, &omega).unwrap());
        // off-diagonal (1,1) monomial is primitive
        let a = Form::monomial(2, BasisElement::new(vec![1], vec![2]), rat1());
        assert!(is_primitive(&metric, &a).unwrap());
        // trace-free diagonal combination is primitive for the identity metric
        let b = Form::monomial(2, BasisElement::new(vec![1], vec![1]), rat1())
            .sub(&Form::monomial(2, BasisElement::new(vec![2], vec![2]), rat1()))
            .unwrap();
        assert!(is_primitive(&metric, &b).unwrap());
    }

    #[test]
    fn commutator_l_lambda_on_k_forms() {
        // [L, Lambda] u = (k - n) u
        let n = 3u8;
        let metric = Metric::diagonal("d", n, &[(2, 1), (1, 2), (3, 1)]).unwrap();
        for k in 0..=(2 * n as usize) {
            for elt in basis::basis_of_degree(n, k) {
                let u = Form::monomial(n, elt, rat1());
                let lambda_u = lambda(&metric, &u).unwrap();
                let l_lambda_u = lefschetz_l(&metric, &lambda_u, 1).unwrap();
                let lambda_l_u = lambda(&metric, &lefschetz_l(&metric, &u, 1).unwrap()).unwrap();
                let comm = l_lambda_u.sub(&lambda_l_u).unwrap();
                let expect = u.scale_rat(&GaussianRational::from_int(k as i64 - n as i64));
                assert_eq!(comm, expect, "commutator fails on degree {k}");
            }
        }
    }

    #[test]
    fn decomposition_reassembles_and_is_primitive() {
        let n = 3u8;
        let metric = Metric::diagonal("d", n, &[(1, 1), (2, 1), (1, 3)]).unwrap();
        // u = omega + primitive monomial
        let omega = metric.omega(RingKind::Rational);
        let prim = Form::monomial(3, BasisElement::new(vec![1], vec![2]), rat1());
        let u = omega.add(&prim).unwrap();
        let comps = lefschetz_decompose(&metric, &u).unwrap();
        assert_eq!(comps.len(), 2);
        let mut back = Form::zero(n, RingKind::Rational);
        for (s, c) in comps.iter().enumerate() {
            assert!(is_primitive(&metric, c).unwrap() || c.is_zero());
            back = back.add(&lefschetz_l(&metric, c, s).unwrap()).unwrap();
        }
        assert_eq!(back, u);
        // (1,1) special case: scalar component is Lambda(u)/n
        let lam = lambda(&metric, &u).unwrap();
        let expect1 =
            lam.scale_rat(&GaussianRational::from_ratio(1, n as i64));
        assert_eq!(comps[1], expect1);
        // primitive input decomposes as (itself, 0, ..)
        let comps2 = lefschetz_decompose(&metric, &prim).unwrap();
        assert_eq!(comps2[0], prim);
        assert!(comps2[1].is_zero());
    }

    #[test]
    fn pointwise_lefschetz_ranks() {
        let metric = Metric::diagonal("d", 3, &[(1, 1), (5, 7), (2, 3)]).unwrap();
        let n = 3usize;
        for k in 0..=n {
            for r in 0..=(n - k) {
                let lr = lefschetz_rank(&metric, k, r).unwrap();
                assert!(lr.injective, "L^{r} not injective on degree {k}");
                if r == n - k {
                    assert!(lr.bijective, "L^{} not bijective on degree {k}", n - k);
                }
            }
        }
    }

    #[test]
    fn top_lefschetz_inversion_round_trip() {
        let metric = Metric::diagonal("d", 3, &[(2, 1), (1, 2), (3, 5)]).unwrap();
        let phi = Form::monomial(3, BasisElement::new(vec![2], vec![]), rat1())
            .add(&Form::monomial(
                3,
                BasisElement::new(vec![], vec![3]),
                Scalar::Rational(GaussianRational::from_ratio_pair((1, 3), (-2, 7))),
            ))
            .unwrap();
        let wn1 = metric.omega_power(RingKind::Rational, 2).unwrap();
        let psi = wn1.wedge(&phi).unwrap();
        let back = invert_top_lefschetz_on_1forms(&metric, &psi).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn decomposition_rejects_above_middle_degree() {
        let metric = Metric::identity(2);
        let top = metric.omega_power(RingKind::Rational, 2).unwrap();
        assert!(matches!(
            lefschetz_decompose(&metric, &top),
            Err(EngineError::DegreeError(_))
        ));
    }
}
