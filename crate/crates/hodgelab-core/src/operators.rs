//! Composite differential operators: twisted differentials `d_h`, their
//! adjoints, the torsion operator, and the Laplacian family.
//!
//! Adjoints come in two implementations that must agree: a star-formula
//! route (`d_h^* = -conj(h) star d_{1/conj(h)} star` and friends) and a
//! Gram route (weighted conjugate transpose of the operator matrix with
//! respect to the L2 inner product). The identity suite exercises the
//! agreement; unit tests here cover the basic contracts.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::RefCell;

use num_rational::BigRational;
use num_traits::Zero;

use crate::basis::{self, BasisElement};
use crate::error::EngineError;
use crate::form::Form;
use crate::lefschetz::{lambda, wedge_adjoint};
use crate::linalg::{self, Matrix};
use crate::metric::Metric;
use crate::model::Model;
use crate::scalar::{GaussianRational, RingKind, Scalar};
use crate::star::{hodge_star, hodge_star_inv};

/// `-1 / conj(h)`, the twist paired with `h` by adjunction.
pub fn neg_inv_conj(h: &GaussianRational) -> Result<GaussianRational, EngineError> {
    let c = h.conj().inv().map_err(|_| EngineError::ZeroH)?;
    Ok(-c)
}

/// Operator kinds of the suite. Twisted kinds carry a nonzero exact
/// parameter `h`.
#[derive(Clone, PartialEq, Debug)]
pub enum OperatorKind {
    D,
    Del,
    Delbar,
    Dh(GaussianRational),
    DStar,
    DelStar,
    DelbarStar,
    DhStar(GaussianRational),
    Tau,
    TauStar,
    LaplacianD,
    LaplacianDel,
    LaplacianDelbar,
    LaplacianH(GaussianRational),
    LaplacianTau,
    LaplacianTauPrime,
}

impl OperatorKind {
    pub fn key(&self) -> String {
        match self {
            OperatorKind::D => "d".into(),
            OperatorKind::Del => "del".into(),
            OperatorKind::Delbar => "delbar".into(),
            OperatorKind::Dh(h) => format!("d_h[{h}]"),
            OperatorKind::DStar => "d_star".into(),
            OperatorKind::DelStar => "del_star".into(),
            OperatorKind::DelbarStar => "delbar_star".into(),
            OperatorKind::DhStar(h) => format!("d_h_star[{h}]"),
            OperatorKind::Tau => "tau".into(),
            OperatorKind::TauStar => "tau_star".into(),
            OperatorKind::LaplacianD => "laplacian_d".into(),
            OperatorKind::LaplacianDel => "laplacian_del".into(),
            OperatorKind::LaplacianDelbar => "laplacian_delbar".into(),
            OperatorKind::LaplacianH(h) => format!("laplacian_h[{h}]"),
            OperatorKind::LaplacianTau => "laplacian_tau".into(),
            OperatorKind::LaplacianTauPrime => "laplacian_tau_prime".into(),
        }
    }

    pub fn parse(s: &str) -> Result<OperatorKind, EngineError> {
        let kind = match s {
            "d" => OperatorKind::D,
            "del" => OperatorKind::Del,
            "delbar" => OperatorKind::Delbar,
            "d_star" => OperatorKind::DStar,
            "del_star" => OperatorKind::DelStar,
            "delbar_star" => OperatorKind::DelbarStar,
            "tau" => OperatorKind::Tau,
            "tau_star" => OperatorKind::TauStar,
            "laplacian_d" => OperatorKind::LaplacianD,
            "laplacian_del" => OperatorKind::LaplacianDel,
            "laplacian_delbar" => OperatorKind::LaplacianDelbar,
            "laplacian_tau" => OperatorKind::LaplacianTau,
            "laplacian_tau_prime" => OperatorKind::LaplacianTauPrime,
            other => {
                if let Some(rest) = other.strip_prefix("d_h[").and_then(|r| r.strip_suffix(']')) {
                    OperatorKind::Dh(crate::scalar::parse_gaussian(rest)?)
                } else if let Some(rest) =
                    other.strip_prefix("d_h_star[").and_then(|r| r.strip_suffix(']'))
                {
                    OperatorKind::DhStar(crate::scalar::parse_gaussian(rest)?)
                } else if let Some(rest) =
                    other.strip_prefix("laplacian_h[").and_then(|r| r.strip_suffix(']'))
                {
                    OperatorKind::LaplacianH(crate::scalar::parse_gaussian(rest)?)
                } else {
                    return Err(EngineError::Config(format!("unknown operator kind {other:?}")));
                }
            }
        };
        Ok(kind)
    }

    fn check_h(&self) -> Result<(), EngineError> {
        match self {
            OperatorKind::Dh(h) | OperatorKind::DhStar(h) | OperatorKind::LaplacianH(h) => {
                if h.is_zero() {
                    Err(EngineError::ZeroH)
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// The adjoint kind with respect to the L2 inner product.
    pub fn adjoint(&self) -> OperatorKind {
        match self {
            OperatorKind::D => OperatorKind::DStar,
            OperatorKind::Del => OperatorKind::DelStar,
            OperatorKind::Delbar => OperatorKind::DelbarStar,
            OperatorKind::Dh(h) => OperatorKind::DhStar(h.clone()),
            OperatorKind::DStar => OperatorKind::D,
            OperatorKind::DelStar => OperatorKind::Del,
            OperatorKind::DelbarStar => OperatorKind::Delbar,
            OperatorKind::DhStar(h) => OperatorKind::Dh(h.clone()),
            OperatorKind::Tau => OperatorKind::TauStar,
            OperatorKind::TauStar => OperatorKind::Tau,
            // the Laplacians are self-adjoint
            other => other.clone(),
        }
    }
}

/// Operator engine bound to one model and one metric, with a write-once
/// matrix cache. Not internally synchronized; build one per worker.
pub struct Ops<'a> {
    pub model: &'a Model,
    pub metric: &'a Metric,
    matrix_cache: RefCell<BTreeMap<String, Matrix>>,
}

impl<'a> Ops<'a> {
    pub fn new(model: &'a Model, metric: &'a Metric) -> Result<Self, EngineError> {
        if metric.n != model.n() {
            return Err(EngineError::MetricMismatch(format!(
                "metric dimension {} vs model dimension {}",
                metric.n,
                model.n()
            )));
        }
        Ok(Ops { model, metric, matrix_cache: RefCell::new(BTreeMap::new()) })
    }

    pub fn n(&self) -> u8 {
        self.model.n()
    }

    pub fn ring(&self) -> RingKind {
        self.model.ring()
    }

    pub fn omega(&self) -> Form {
        self.metric.omega(self.ring())
    }

    pub fn omega_power(&self, r: usize) -> Result<Form, EngineError> {
        self.metric.omega_power(self.ring(), r)
    }

    pub fn l2(&self, u: &Form, v: &Form) -> Result<Scalar, EngineError> {
        self.metric.l2_inner(self.model, u, v)
    }

    pub fn star(&self, u: &Form) -> Result<Form, EngineError> {
        hodge_star(self.metric, u)
    }

    pub fn star_inv(&self, u: &Form) -> Result<Form, EngineError> {
        hodge_star_inv(self.metric, u)
    }

    pub fn lambda(&self, u: &Form) -> Result<Form, EngineError> {
        lambda(self.metric, u)
    }

    pub fn d(&self, u: &Form) -> Result<Form, EngineError> {
        self.model.d(u)
    }

    pub fn del(&self, u: &Form) -> Result<Form, EngineError> {
        self.model.del(u)
    }

    pub fn delbar(&self, u: &Form) -> Result<Form, EngineError> {
        self.model.delbar(u)
    }

    /// `d_h = h del + delbar`.
    pub fn d_h(&self, h: &GaussianRational, u: &Form) -> Result<Form, EngineError> {
        if h.is_zero() {
            return Err(EngineError::ZeroH);
        }
        Ok(self.del(u)?.scale_rat(h).add(&self.delbar(u)?)?)
    }

    /// Star-formula adjoint `d_h^* = -conj(h) star d_{1/conj(h)} star`.
    pub fn d_h_star(&self, h: &GaussianRational, u: &Form) -> Result<Form, EngineError> {
        let hinv = h.conj().inv().map_err(|_| EngineError::ZeroH)?;
        let inner = self.star(u)?;
        let mid = self.d_h(&hinv, &inner)?;
        Ok(self.star(&mid)?.scale_rat(&h.conj()).neg())
    }

    pub fn d_star(&self, u: &Form) -> Result<Form, EngineError> {
        self.d_h_star(&GaussianRational::one(), u)
    }

    /// `del^* = -star delbar star`.
    pub fn del_star(&self, u: &Form) -> Result<Form, EngineError> {
        Ok(self.star(&self.delbar(&self.star(u)?)?)?.neg())
    }

    /// `delbar^* = -star del star`.
    pub fn delbar_star(&self, u: &Form) -> Result<Form, EngineError> {
        Ok(self.star(&self.del(&self.star(u)?)?)?.neg())
    }

    pub fn del_omega(&self) -> Result<Form, EngineError> {
        self.del(&self.omega())
    }

    /// Torsion operator `tau = [Lambda, (del omega) /\ .]`, order 0 and
    /// type (1,0).
    pub fn tau(&self, u: &Form) -> Result<Form, EngineError> {
        let dw = self.del_omega()?;
        let a = self.lambda(&dw.wedge(u)?)?;
        let b = dw.wedge(&self.lambda(u)?)?;
        Ok(a.sub(&b)?)
    }

    /// Conjugate torsion `taubar = [Lambda, (delbar omega) /\ .]`.
    pub fn tau_bar(&self, u: &Form) -> Result<Form, EngineError> {
        let dwb = self.delbar(&self.omega())?;
        let a = self.lambda(&dwb.wedge(u)?)?;
        let b = dwb.wedge(&self.lambda(u)?)?;
        Ok(a.sub(&b)?)
    }

    /// Star-route adjoint of `tau`: since `tau = [Lambda, L_{del omega}]`,
    /// its adjoint is `[L_{del omega}^*, L_omega]` with the pointwise
    /// wedge adjoint.
    pub fn tau_star(&self, u: &Form) -> Result<Form, EngineError> {
        let dw = self.del_omega()?;
        let omega = self.omega();
        let a = wedge_adjoint(self.metric, &dw, &omega.wedge(u)?)?;
        let b = omega.wedge(&wedge_adjoint(self.metric, &dw, u)?)?;
        Ok(a.sub(&b)?)
    }

    pub fn tau_bar_star(&self, u: &Form) -> Result<Form, EngineError> {
        let dwb = self.delbar(&self.omega())?;
        let omega = self.omega();
        let a = wedge_adjoint(self.metric, &dwb, &omega.wedge(u)?)?;
        let b = omega.wedge(&wedge_adjoint(self.metric, &dwb, u)?)?;
        Ok(a.sub(&b)?)
    }

    /// Anticommutator `A B + B A` of two odd operators.
    fn anticommutator(
        &self,
        a: &dyn Fn(&Form) -> Result<Form, EngineError>,
        b: &dyn Fn(&Form) -> Result<Form, EngineError>,
        u: &Form,
    ) -> Result<Form, EngineError> {
        let ab = a(&b(u)?)?;
        let ba = b(&a(u)?)?;
        Ok(ab.add(&ba)?)
    }

    pub fn laplacian_d(&self, u: &Form) -> Result<Form, EngineError> {
        self.anticommutator(&|v| self.d(v), &|v| self.d_star(v), u)
    }

    pub fn laplacian_del(&self, u: &Form) -> Result<Form, EngineError> {
        self.anticommutator(&|v| self.del(v), &|v| self.del_star(v), u)
    }

    pub fn laplacian_delbar(&self, u: &Form) -> Result<Form, EngineError> {
        self.anticommutator(&|v| self.delbar(v), &|v| self.delbar_star(v), u)
    }

    pub fn laplacian_h(&self, h: &GaussianRational, u: &Form) -> Result<Form, EngineError> {
        self.anticommutator(&|v| self.d_h(h, v), &|v| self.d_h_star(h, v), u)
    }

    /// `laplacian_tau = [d + tau, d^* + tau^*]`.
    pub fn laplacian_tau(&self, u: &Form) -> Result<Form, EngineError> {
        self.anticommutator(
            &|v| Ok(self.d(v)?.add(&self.tau(v)?)?),
            &|v| Ok(self.d_star(v)?.add(&self.tau_star(v)?)?),
            u,
        )
    }

    /// `laplacian_tau_prime = [del + tau, del^* + tau^*]`.
    pub fn laplacian_tau_prime(&self, u: &Form) -> Result<Form, EngineError> {
        self.anticommutator(
            &|v| Ok(self.del(v)?.add(&self.tau(v)?)?),
            &|v| Ok(self.del_star(v)?.add(&self.tau_star(v)?)?),
            u,
        )
    }

    /// Applies an operator kind (star-formula route for the adjoints).
    pub fn apply(&self, kind: &OperatorKind, u: &Form) -> Result<Form, EngineError> {
        kind.check_h()?;
        match kind {
            OperatorKind::D => self.d(u),
            OperatorKind::Del => self.del(u),
            OperatorKind::Delbar => self.delbar(u),
            OperatorKind::Dh(h) => self.d_h(h, u),
            OperatorKind::DStar => self.d_star(u),
            OperatorKind::DelStar => self.del_star(u),
            OperatorKind::DelbarStar => self.delbar_star(u),
            OperatorKind::DhStar(h) => self.d_h_star(h, u),
            OperatorKind::Tau => self.tau(u),
            OperatorKind::TauStar => self.tau_star(u),
            OperatorKind::LaplacianD => self.laplacian_d(u),
            OperatorKind::LaplacianDel => self.laplacian_del(u),
            OperatorKind::LaplacianDelbar => self.laplacian_delbar(u),
            OperatorKind::LaplacianH(h) => self.laplacian_h(h, u),
            OperatorKind::LaplacianTau => self.laplacian_tau(u),
            OperatorKind::LaplacianTauPrime => self.laplacian_tau_prime(u),
        }
    }

    /// Adjoint of `kind` by the star-formula route.
    pub fn adjoint_apply_star(&self, kind: &OperatorKind, u: &Form) -> Result<Form, EngineError> {
        self.apply(&kind.adjoint(), u)
    }

    /// Adjoint of `kind` by the Gram route: the weighted conjugate
    /// transpose of its matrix with respect to the L2 inner product.
    pub fn adjoint_apply_gram(&self, kind: &OperatorKind, u: &Form) -> Result<Form, EngineError> {
        kind.check_h()?;
        if self.ring() == RingKind::Fourier {
            let parts = u.split_frequencies();
            let mut out = Vec::new();
            for (freq, f) in parts {
                out.push((freq.clone(), self.gram_adjoint_on_frequency(kind, &freq, &f)?));
            }
            return Ok(Form::merge_frequencies(self.n(), &out));
        }
        let full = basis::full_basis(self.n());
        let m = self.matrix_on(kind, &full, &full)?;
        let adj = self.gram_conjugate_transpose(&m, &full);
        let v = linalg::form_to_vector(&full, u);
        Ok(linalg::vector_to_form(self.n(), u.ring, &full, &adj.mul_vec(&v)))
    }

    /// `G^{-1} M^H G` for the diagonal Gram matrix over `basis_elts`.
    fn gram_conjugate_transpose(&self, m: &Matrix, basis_elts: &[BasisElement]) -> Matrix {
        let mut adj = m.hermitian_transpose();
        for r in 0..adj.rows {
            let wr = self.metric.weight(&basis_elts[r]);
            for c in 0..adj.cols {
                if adj.get(r, c).is_zero() {
                    continue;
                }
                let wc = self.metric.weight(&basis_elts[c]);
                let factor = GaussianRational::new(wc / wr.clone(), BigRational::zero());
                let v = adj.get(r, c).mul_rat(&factor);
                adj.set(r, c, v);
            }
        }
        adj
    }

    /// Gram adjoint on a single frequency block of the Fourier torus. The
    /// suite operators preserve frequencies on the flat torus, so the L2
    /// adjoint acts block-diagonally by the orthogonality of characters.
    fn gram_adjoint_on_frequency(
        &self,
        kind: &OperatorKind,
        freq: &[i32],
        part: &Form,
    ) -> Result<Form, EngineError> {
        let full = basis::full_basis(self.n());
        let key: Vec<i32> = {
            let mut k = freq.to_vec();
            while k.last() == Some(&0) {
                k.pop();
            }
            k
        };
        let mut cols = Vec::new();
        for elt in &full {
            let probe = Form::monomial(
                self.n(),
                elt.clone(),
                Scalar::Fourier(crate::scalar::FourierSum::term(
                    freq.to_vec(),
                    num_complex::Complex64::new(1.0, 0.0),
                )),
            );
            let img = self.apply(kind, &probe)?;
            let mut col = Form::zero(self.n(), RingKind::Float);
            for (b, c) in img.iter() {
                let Scalar::Fourier(fs) = c else { unreachable!() };
                if let Some(v) = fs.terms.get(&key) {
                    col.add_to(b.clone(), &Scalar::Float(*v));
                }
            }
            cols.push(linalg::form_to_vector(&full, &col));
        }
        let m = Matrix::from_columns(full.len(), RingKind::Float, &cols);
        let adj = self.gram_conjugate_transpose(&m, &full);
        let v = linalg::form_to_vector(&full, part);
        Ok(linalg::vector_to_form(self.n(), RingKind::Float, &full, &adj.mul_vec(&v)))
    }

    /// Matrix of an operator between explicit bases. Full-basis matrices
    /// are cached per kind; population is idempotent.
    pub fn matrix_on(
        &self,
        kind: &OperatorKind,
        basis_in: &[BasisElement],
        basis_out: &[BasisElement],
    ) -> Result<Matrix, EngineError> {
        let full_len = 1usize << (2 * self.n());
        let cache_key = if basis_in.len() == full_len && basis_out.len() == full_len {
            Some(kind.key())
        } else {
            None
        };
        if let Some(k) = &cache_key {
            if let Some(m) = self.matrix_cache.borrow().get(k) {
                return Ok(m.clone());
            }
        }
        let mut cols = Vec::new();
        for elt in basis_in {
            let e = Form::monomial(self.n(), elt.clone(), Scalar::one(self.ring()));
            let img = self.apply(kind, &e)?;
            cols.push(linalg::form_to_vector(basis_out, &img));
        }
        let m = Matrix::from_columns(basis_out.len(), self.ring(), &cols);
        if let Some(k) = cache_key {
            self.matrix_cache.borrow_mut().insert(k, m.clone());
        }
        Ok(m)
    }

    /// The four Hermitian commutation identities relating `Lambda`, the
    /// differentials, their adjoints and the torsion operators, checked on
    /// every basis element. Returns `(label, max residual, ok)` per
    /// identity.
    pub fn hermitian_commutation_residuals(
        &self,
    ) -> Result<Vec<(String, f64, bool)>, EngineError> {
        let n = self.n();
        let full = basis::full_basis(n);
        let omega = self.omega();
        let i_unit = GaussianRational::i();
        let mut out = Vec::new();
        for case in 0..4usize {
            let label = match case {
                0 => "i[Lambda, delbar] = del_star + tau_star",
                1 => "-i[Lambda, del] = delbar_star + taubar_star",
                2 => "-i[delbar_star, L] = del + tau",
                _ => "i[del_star, L] = delbar + taubar",
            };
            let mut max_res = 0.0f64;
            let mut ok = true;
            for elt in &full {
                let u = Form::monomial(n, elt.clone(), Scalar::one(self.ring()));
                let (lhs, rhs) = match case {
                    0 => {
                        let a = self.lambda(&self.delbar(&u)?)?;
                        let b = self.delbar(&self.lambda(&u)?)?;
                        (
                            a.sub(&b)?.scale_rat(&i_unit),
                            self.del_star(&u)?.add(&self.tau_star(&u)?)?,
                        )
                    }
                    1 => {
                        let a = self.lambda(&self.del(&u)?)?;
                        let b = self.del(&self.lambda(&u)?)?;
                        (
                            a.sub(&b)?.scale_rat(&i_unit).neg(),
                            self.delbar_star(&u)?.add(&self.tau_bar_star(&u)?)?,
                        )
                    }
                    2 => {
                        let a = self.delbar_star(&omega.wedge(&u)?)?;
                        let b = omega.wedge(&self.delbar_star(&u)?)?;
                        (a.sub(&b)?.scale_rat(&i_unit).neg(), self.del(&u)?.add(&self.tau(&u)?)?)
                    }
                    _ => {
                        let a = self.del_star(&omega.wedge(&u)?)?;
                        let b = omega.wedge(&self.del_star(&u)?)?;
                        (a.sub(&b)?.scale_rat(&i_unit), self.delbar(&u)?.add(&self.tau_bar(&u)?)?)
                    }
                };
                let res = lhs.sub(&rhs)?;
                let norm = res.max_abs();
                if norm > max_res {
                    max_res = norm;
                }
                if self.ring() == RingKind::Rational {
                    ok &= res.is_zero();
                } else {
                    ok &= norm <= 1e-9;
                }
            }
            out.push((label.to_string(), max_res, ok));
        }
        Ok(out)
    }
}

/// Which harmonic space to compute.
#[derive(Clone, PartialEq, Debug)]
pub enum HarmonicKind {
    D,
    Del,
    Delbar,
    H(GaussianRational),
    Tau,
    TauPrime,
    BottChern,
    Aeppli,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum DegreeSpec {
    Degree(usize),
    Bidegree(usize, usize),
}

impl<'a> Ops<'a> {
    fn basis_for(&self, spec: DegreeSpec) -> Vec<BasisElement> {
        match spec {
            DegreeSpec::Degree(k) => basis::basis_of_degree(self.n(), k),
            DegreeSpec::Bidegree(p, q) => basis::basis_of_bidegree(self.n(), p, q),
        }
    }

    /// An exactly orthogonalized basis of the requested harmonic space.
    /// Laplacian kernels are computed as intersections `ker(op) /\
    /// ker(op^*)`; the Bott-Chern kernel is `ker del /\ ker delbar /\
    /// ker (del delbar)^*` and the Aeppli kernel `ker (del delbar) /\
    /// ker del^* /\ ker delbar^*`.
    pub fn harmonic_basis(
        &self,
        kind: &HarmonicKind,
        spec: DegreeSpec,
    ) -> Result<Vec<Form>, EngineError> {
        if self.ring() == RingKind::Fourier {
            return Err(EngineError::Config(
                "harmonic kernels are computed on invariant Lie models".into(),
            ));
        }
        let dom = self.basis_for(spec);
        if dom.is_empty() {
            return Ok(Vec::new());
        }
        let full = basis::full_basis(self.n());
        type RowFn<'s, 'b> = &'b dyn Fn(&Form) -> Result<Form, EngineError>;
        let f_d = |u: &Form| self.d(u);
        let f_dstar = |u: &Form| self.d_star(u);
        let f_del = |u: &Form| self.del(u);
        let f_delstar = |u: &Form| self.del_star(u);
        let f_delbar = |u: &Form| self.delbar(u);
        let f_delbarstar = |u: &Form| self.delbar_star(u);
        let h_val = match kind {
            HarmonicKind::H(h) => h.clone(),
            _ => GaussianRational::one(),
        };
        let f_dh = |u: &Form| self.d_h(&h_val, u);
        let f_dhstar = |u: &Form| self.d_h_star(&h_val, u);
        let f_dtau = |u: &Form| -> Result<Form, EngineError> { Ok(self.d(u)?.add(&self.tau(u)?)?) };
        let f_dtaustar =
            |u: &Form| -> Result<Form, EngineError> { Ok(self.d_star(u)?.add(&self.tau_star(u)?)?) };
        let f_deltau =
            |u: &Form| -> Result<Form, EngineError> { Ok(self.del(u)?.add(&self.tau(u)?)?) };
        let f_deltaustar = |u: &Form| -> Result<Form, EngineError> {
            Ok(self.del_star(u)?.add(&self.tau_star(u)?)?)
        };
        let f_deldelbar =
            |u: &Form| -> Result<Form, EngineError> { self.del(&self.delbar(u)?) };
        let f_deldelbar_star =
            |u: &Form| -> Result<Form, EngineError> { self.delbar_star(&self.del_star(u)?) };
        let rows_fns: Vec<RowFn> = match kind {
            HarmonicKind::D => alloc::vec![&f_d as RowFn, &f_dstar],
            HarmonicKind::Del => alloc::vec![&f_del as RowFn, &f_delstar],
            HarmonicKind::Delbar => alloc::vec![&f_delbar as RowFn, &f_delbarstar],
            HarmonicKind::H(_) => alloc::vec![&f_dh as RowFn, &f_dhstar],
            HarmonicKind::Tau => alloc::vec![&f_dtau as RowFn, &f_dtaustar],
            HarmonicKind::TauPrime => alloc::vec![&f_deltau as RowFn, &f_deltaustar],
            HarmonicKind::BottChern => {
                alloc::vec![&f_del as RowFn, &f_delbar, &f_deldelbar_star]
            }
            HarmonicKind::Aeppli => {
                alloc::vec![&f_deldelbar as RowFn, &f_delstar, &f_delbarstar]
            }
        };
        let mut blocks: Vec<Matrix> = Vec::new();
        for f in &rows_fns {
            let mut cols = Vec::new();
            for elt in &dom {
                let e = Form::monomial(self.n(), elt.clone(), Scalar::one(self.ring()));
                cols.push(linalg::form_to_vector(&full, &f(&e)?));
            }
            blocks.push(Matrix::from_columns(full.len(), self.ring(), &cols));
        }
        let total_rows: usize = blocks.iter().map(|m| m.rows).sum();
        let mut stacked = Matrix::zero(total_rows, dom.len(), self.ring());
        let mut off = 0;
        for m in blocks {
            for r in 0..m.rows {
                for c in 0..m.cols {
                    if !m.get(r, c).is_zero() {
                        stacked.set(off + r, c, m.get(r, c).clone());
                    }
                }
            }
            off += m.rows;
        }
        let kernel = stacked.nullspace();
        let forms: Vec<Form> =
            kernel.iter().map(|v| linalg::vector_to_form(self.n(), self.ring(), &dom, v)).collect();
        self.metric.orthogonalize(self.model, &forms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn rat(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    #[test]
    fn d1_equals_d() {
        let model = catalog::iwasawa();
        let metric = Metric::identity(3);
        let ops = Ops::new(&model, &metric).unwrap();
        for elt in basis::full_basis(3) {
            let u = Form::monomial(3, elt, Scalar::one(RingKind::Rational));
            assert_eq!(ops.d_h(&rat(1), &u).unwrap(), ops.d(&u).unwrap());
        }
    }

    #[test]
    fn tau_vanishes_on_kahler_torus() {
        let model = catalog::torus(2);
        let metric = Metric::diagonal("d", 2, &[(2, 1), (3, 5)]).unwrap();
        let ops = Ops::new(&model, &metric).unwrap();
        for elt in basis::full_basis(2) {
            let u = Form::monomial(2, elt, Scalar::one(RingKind::Rational));
            assert!(ops.tau(&u).unwrap().is_zero());
            assert!(ops.tau_star(&u).unwrap().is_zero());
        }
    }

    #[test]
    fn tau_nonzero_on_iwasawa_and_is_type_10() {
        let model = catalog::iwasawa();
        let metric = Metric::identity(3);
        let ops = Ops::new(&model, &metric).unwrap();
        let e3 = Form::monomial(
            3,
            BasisElement::new(alloc::vec![3], alloc::vec![]),
            Scalar::one(RingKind::Rational),
        );
        let t = ops.tau(&e3).unwrap();
        assert!(!t.is_zero());
        assert_eq!(t.pure_bidegree(), Some((2, 0)));
    }

    #[test]
    fn adjoint_routes_agree_exactly() {
        let model = catalog::iwasawa();
        let metric = Metric::diagonal("d", 3, &[(1, 1), (2, 1), (1, 3)]).unwrap();
        let ops = Ops::new(&model, &metric).unwrap();
        let kinds = [
            OperatorKind::D,
            OperatorKind::Del,
            OperatorKind::Delbar,
            OperatorKind::Dh(GaussianRational::from_ratio_pair((1, 1), (1, 1))),
            OperatorKind::Tau,
        ];
        for kind in &kinds {
            for elt in basis::full_basis(3) {
                let u = Form::monomial(3, elt, Scalar::one(RingKind::Rational));
                let a = ops.adjoint_apply_star(kind, &u).unwrap();
                let b = ops.adjoint_apply_gram(kind, &u).unwrap();
                assert_eq!(a, b, "adjoint routes disagree for {} on {}", kind.key(), u);
            }
        }
    }

    #[test]
    fn adjoint_pairing_identity() {
        // <<d_h u, v>> = <<u, d_h^* v>>
        let model = catalog::sl2c();
        let metric = Metric::diagonal("d", 3, &[(1, 1), (1, 2), (3, 1)]).unwrap();
        let ops = Ops::new(&model, &metric).unwrap();
        let h = GaussianRational::from_ratio_pair((2, 1), (1, 1));
        let full = basis::full_basis(3);
        for a in full.iter().step_by(7) {
            for b in full.iter().step_by(5) {
                let u = Form::monomial(3, a.clone(), Scalar::one(RingKind::Rational));
                let v = Form::monomial(3, b.clone(), Scalar::one(RingKind::Rational));
                let lhs = ops.l2(&ops.d_h(&h, &u).unwrap(), &v).unwrap();
                let rhs = ops.l2(&u, &ops.d_h_star(&h, &v).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn laplacian_psd_and_kernel_dims() {
        let model = catalog::torus(2);
        let metric = Metric::identity(2);
        let ops = Ops::new(&model, &metric).unwrap();
        // on the invariant torus complex every form is harmonic
        let h1 = ops.harmonic_basis(&HarmonicKind::D, DegreeSpec::Degree(1)).unwrap();
        assert_eq!(h1.len(), 4);
        let model3 = catalog::iwasawa();
        let metric3 = Metric::identity(3);
        let ops3 = Ops::new(&model3, &metric3).unwrap();
        let h1_iwa = ops3.harmonic_basis(&HarmonicKind::D, DegreeSpec::Degree(1)).unwrap();
        assert_eq!(h1_iwa.len(), 4);
        for elt in basis::basis_of_degree(3, 2).into_iter().step_by(3) {
            let u = Form::monomial(3, elt, Scalar::one(RingKind::Rational));
            let q = ops3.l2(&ops3.laplacian_d(&u).unwrap(), &u).unwrap();
            let q = q.real_rational().unwrap();
            assert!(q >= BigRational::zero());
        }
    }

    #[test]
    fn hermitian_commutation_on_catalog_models() {
        for model in [catalog::torus(2), catalog::iwasawa(), catalog::sl2c()] {
            let metric = Metric::diagonal(
                "d",
                model.n(),
                &(0..model.n()).map(|k| (k as i64 + 1, 2)).collect::<Vec<_>>(),
            )
            .unwrap();
            let ops = Ops::new(&model, &metric).unwrap();
            for (label, res, ok) in ops.hermitian_commutation_residuals().unwrap() {
                assert!(ok, "{label} fails on {} with residual {res}", model.name());
            }
        }
    }

    #[test]
    fn star_maps_aeppli_to_bott_chern_harmonics() {
        let model = catalog::iwasawa();
        let metric = Metric::identity(3);
        let ops = Ops::new(&model, &metric).unwrap();
        let a_basis =
            ops.harmonic_basis(&HarmonicKind::Aeppli, DegreeSpec::Bidegree(2, 2)).unwrap();
        let bc_basis =
            ops.harmonic_basis(&HarmonicKind::BottChern, DegreeSpec::Bidegree(1, 1)).unwrap();
        assert_eq!(a_basis.len(), bc_basis.len());
        assert!(!a_basis.is_empty());
        let pq_basis = basis::basis_of_bidegree(3, 1, 1);
        let bc_mat = linalg::forms_to_matrix(RingKind::Rational, &pq_basis, &bc_basis);
        for a in &a_basis {
            let s = ops.star(a).unwrap();
            let v = linalg::form_to_vector(&pq_basis, &s);
            assert!(bc_mat.solve(&v).is_some(), "star image leaves the BC harmonic space");
        }
    }
}
