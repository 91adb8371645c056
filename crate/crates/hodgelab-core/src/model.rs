//! Finite-dimensional stand-ins for compact complex manifolds.
//!
//! Two kinds are provided: invariant complexes of complex Lie groups given
//! by structure constants (the differential splits into types `(2,0)` and
//! `(1,1)` on the holomorphic coframe) and a frequency-truncated flat torus
//! whose coefficients are finite Fourier sums.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::basis::{self, BasisElement};
use crate::error::EngineError;
use crate::form::Form;
use crate::scalar::{FourierSum, GaussianRational, RingKind, Scalar};

/// Outcome of checking a model's structural invariants.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub model: String,
    pub ok: bool,
    pub checks: Vec<ValidationCheck>,
}

#[derive(Clone, Debug)]
pub struct ValidationCheck {
    pub name: String,
    pub ok: bool,
    pub witness: Option<String>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, ok: bool, witness: Option<String>) {
        if !ok {
            self.ok = false;
        }
        self.checks.push(ValidationCheck { name: name.to_string(), ok, witness });
    }
}

/// Invariant complex of a complex Lie group, defined by the differentials of
/// the holomorphic coframe. Differentials of the conjugate coframe follow by
/// conjugation.
#[derive(Clone)]
pub struct LieModel {
    pub name: String,
    pub n: u8,
    pub ring: RingKind,
    /// `d e^k`, index `k-1`.
    d_holo: Vec<Form>,
    del_table: BTreeMap<BasisElement, Form>,
    delbar_table: BTreeMap<BasisElement, Form>,
    pub volume: BigRational,
}

impl LieModel {
    /// Builds the model and extends the differential to the whole exterior
    /// algebra by the Leibniz rule. Structural invariants are checked by
    /// [`LieModel::validate`], not here.
    pub fn new(name: &str, n: u8, d_holo: Vec<Form>) -> Self {
        assert_eq!(d_holo.len(), n as usize);
        let ring = d_holo.first().map(|f| f.ring).unwrap_or(RingKind::Rational);
        let mut model = LieModel {
            name: name.to_string(),
            n,
            ring,
            d_holo,
            del_table: BTreeMap::new(),
            delbar_table: BTreeMap::new(),
            volume: BigRational::one(),
        };
        model.build_tables();
        model
    }

    /// Differential of a single coframe generator, split by type.
    fn d_generator(&self, holo: bool, k: u8) -> (Form, Form) {
        let d = if holo {
            self.d_holo[(k - 1) as usize].clone()
        } else {
            self.d_holo[(k - 1) as usize].conjugate()
        };
        if holo {
            (d.component(2, 0), d.component(1, 1))
        } else {
            (d.component(1, 1), d.component(0, 2))
        }
    }

    fn build_tables(&mut self) {
        let n = self.n;
        for k in 0..=(2 * n as usize) {
            for elt in basis::basis_of_degree(n, k) {
                let (del, delbar) = self.derive_element(&elt);
                self.del_table.insert(elt.clone(), del);
                self.delbar_table.insert(elt, delbar);
            }
        }
    }

    /// Leibniz extension of the generator differentials to a monomial.
    fn derive_element(&self, elt: &BasisElement) -> (Form, Form) {
        // factors in stored order: e^{i_1}..e^{i_p} ebar^{j_1}..ebar^{j_q}
        let mut factors: Vec<(bool, u8)> = Vec::new();
        for &v in &elt.i {
            factors.push((true, v));
        }
        for &v in &elt.j {
            factors.push((false, v));
        }
        let mut del = Form::zero(self.n, self.ring);
        let mut delbar = Form::zero(self.n, self.ring);
        for t in 0..factors.len() {
            let (dg_del, dg_delbar) = self.d_generator(factors[t].0, factors[t].1);
            let prefix = self.monomial_of(&factors[..t]);
            let suffix = self.monomial_of(&factors[t + 1..]);
            let sign_neg = t % 2 == 1;
            for (part, acc) in [(dg_del, &mut del), (dg_delbar, &mut delbar)] {
                if part.is_zero() {
                    continue;
                }
                let mut term = prefix.wedge(&part).unwrap().wedge(&suffix).unwrap();
                if sign_neg {
                    term = term.neg();
                }
                *acc = acc.add(&term).unwrap();
            }
        }
        (del, delbar)
    }

    fn monomial_of(&self, factors: &[(bool, u8)]) -> Form {
        let mut i = Vec::new();
        let mut j = Vec::new();
        for &(holo, v) in factors {
            if holo {
                i.push(v);
            } else {
                j.push(v);
            }
        }
        Form::monomial(self.n, BasisElement::new(i, j), Scalar::one(self.ring))
    }

    fn apply_table(&self, table: &BTreeMap<BasisElement, Form>, u: &Form) -> Form {
        let mut out = Form::zero(self.n, self.ring);
        for (elt, c) in u.iter() {
            let img = table.get(elt).expect("basis element in table");
            if img.is_zero() {
                continue;
            }
            out = out.add(&img.scale(c).unwrap()).unwrap();
        }
        out
    }

    pub fn del(&self, u: &Form) -> Form {
        self.apply_table(&self.del_table, u)
    }

    pub fn delbar(&self, u: &Form) -> Form {
        self.apply_table(&self.delbar_table, u)
    }

    /// Rewrites the model in a new coframe `f = T e` for an invertible
    /// complex matrix `T`, producing a float-ring model. The generator
    /// differentials become `d f^l = sum_j T_{lj} (d e^j)` expressed in the
    /// `f` coframe through the inverse substitution.
    pub fn change_coframe(
        &self,
        name: &str,
        t: &[alloc::vec::Vec<num_complex::Complex64>],
    ) -> Result<LieModel, crate::error::EngineError> {
        use crate::linalg::Matrix;
        let n = self.n as usize;
        if t.len() != n || t.iter().any(|r| r.len() != n) {
            return Err(crate::error::EngineError::Config("coframe matrix must be n x n".into()));
        }
        // invert T over the floats
        let mut m = Matrix::zero(n, n, RingKind::Float);
        for (r, row) in t.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, Scalar::Float(*v));
            }
        }
        let mut inv_cols: Vec<Vec<Scalar>> = Vec::new();
        for c in 0..n {
            let mut e = alloc::vec![Scalar::Float(num_complex::Complex64::new(0.0, 0.0)); n];
            e[c] = Scalar::Float(num_complex::Complex64::new(1.0, 0.0));
            let col = m.solve(&e).ok_or_else(|| {
                crate::error::EngineError::Config("coframe matrix is singular".into())
            })?;
            inv_cols.push(col);
        }
        // images of the old generators in the new coframe: e^j = sum_k S_jk f^k
        // with S = T^{-1}
        let mut images = Vec::new();
        for j in 0..n {
            let mut img = Form::zero(self.n, RingKind::Float);
            for k in 0..n {
                // S_jk = (T^{-1})_{jk}: row j of the inverse
                img.add_to(
                    BasisElement::new(alloc::vec![(k + 1) as u8], Vec::new()),
                    &inv_cols[k][j],
                );
            }
            images.push(img);
        }
        let mut new_gens = Vec::new();
        for l in 0..n {
            // d f^l = sum_j T_{lj} d e^j, rewritten in the f coframe
            let mut df = Form::zero(self.n, RingKind::Float);
            for j in 0..n {
                let de = self.d_holo[j].promote(RingKind::Float);
                if de.is_zero() {
                    continue;
                }
                let term = de.scale(&Scalar::Float(t[l][j]))?;
                df = df.add(&term)?;
            }
            new_gens.push(df.substitute(&images)?);
        }
        Ok(LieModel::new(name, self.n, new_gens))
    }

    pub fn validate(&self) -> ValidationReport {
        let vtol = if self.ring == RingKind::Rational { 0.0 } else { 1e-9 };
        let mut report =
            ValidationReport { model: self.name.clone(), ok: true, checks: Vec::new() };
        // generators must be honest degree-2 differentials of pure types
        let mut type_ok = true;
        let mut type_witness = None;
        for k in 1..=self.n {
            let d = &self.d_holo[(k - 1) as usize];
            let stray = d.sub(&d.component(2, 0).add(&d.component(1, 1)).unwrap()).unwrap();
            if !stray.is_negligible(vtol) {
                type_ok = false;
                type_witness = Some(format!("d e{k} has a component outside (2,0)+(1,1)"));
                break;
            }
        }
        report.push("generator differentials have types (2,0)+(1,1)", type_ok, type_witness);

        // d^2 = 0 on every generator (Jacobi identity)
        let mut jacobi_ok = true;
        let mut jacobi_witness = None;
        for k in 1..=self.n {
            for holo in [true, false] {
                let gen = if holo {
                    Form::monomial(
                        self.n,
                        BasisElement::new(alloc::vec![k], Vec::new()),
                        Scalar::one(self.ring),
                    )
                } else {
                    Form::monomial(
                        self.n,
                        BasisElement::new(Vec::new(), alloc::vec![k]),
                        Scalar::one(self.ring),
                    )
                };
                let d1 = self.del(&gen).add(&self.delbar(&gen)).unwrap();
                let d2 = self.del(&d1).add(&self.delbar(&d1)).unwrap();
                if !d2.is_negligible(vtol) {
                    jacobi_ok = false;
                    let label = if holo { format!("e{k}") } else { format!("ebar{k}") };
                    jacobi_witness = Some(format!("d^2 {label} = {d2}"));
                    break;
                }
            }
            if !jacobi_ok {
                break;
            }
        }
        report.push("d^2 = 0 on generators", jacobi_ok, jacobi_witness);

        // type splitting: del^2 = 0, delbar^2 = 0, del delbar + delbar del = 0
        let mut split_ok = true;
        let mut split_witness = None;
        'outer: for k in 1..=self.n {
            for holo in [true, false] {
                let gen = if holo {
                    Form::monomial(
                        self.n,
                        BasisElement::new(alloc::vec![k], Vec::new()),
                        Scalar::one(self.ring),
                    )
                } else {
                    Form::monomial(
                        self.n,
                        BasisElement::new(Vec::new(), alloc::vec![k]),
                        Scalar::one(self.ring),
                    )
                };
                let dd = self.del(&self.del(&gen));
                let bb = self.delbar(&self.delbar(&gen));
                let mixed = self.del(&self.delbar(&gen)).add(&self.delbar(&self.del(&gen))).unwrap();
                if !dd.is_negligible(vtol) || !bb.is_negligible(vtol) || !mixed.is_negligible(vtol)
                {
                    split_ok = false;
                    split_witness = Some(format!("type splitting fails on generator index {k}"));
                    break 'outer;
                }
            }
        }
        report.push("del^2 = delbar^2 = del delbar + delbar del = 0", split_ok, split_witness);

        // conjugation compatibility on generators
        let mut conj_ok = true;
        let mut conj_witness = None;
        for k in 1..=self.n {
            let gen = Form::monomial(
                self.n,
                BasisElement::new(alloc::vec![k], Vec::new()),
                Scalar::one(self.ring),
            );
            let lhs = self.del(&gen.conjugate()).add(&self.delbar(&gen.conjugate())).unwrap();
            let rhs = self.del(&gen).add(&self.delbar(&gen)).unwrap().conjugate();
            if !lhs.sub(&rhs).unwrap().is_negligible(vtol) {
                conj_ok = false;
                conj_witness = Some(format!("d(conj e{k}) != conj(d e{k})"));
                break;
            }
        }
        report.push("d commutes with conjugation", conj_ok, conj_witness);
        report
    }
}

/// Frequency-truncated flat torus of complex dimension `n`. Forms carry
/// Fourier-sum coefficients over frequencies in `Z^{2n}` bounded by
/// `cutoff` in the infinity norm.
#[derive(Clone)]
pub struct TorusModel {
    pub name: String,
    pub n: u8,
    pub cutoff: i32,
}

impl TorusModel {
    pub fn new(name: &str, n: u8, cutoff: i32) -> Self {
        TorusModel { name: name.to_string(), n, cutoff }
    }

    fn check_support(&self, u: &Form) -> Result<(), EngineError> {
        for (_, c) in u.iter() {
            if let Scalar::Fourier(s) = c {
                if s.max_freq() > self.cutoff {
                    return Err(EngineError::SupportOverflow(format!(
                        "frequency support exceeds cutoff {}",
                        self.cutoff
                    )));
                }
            }
        }
        Ok(())
    }

    /// Frequency multiplier of `d/dz_j` on the character with frequency `k`.
    fn holo_multiplier(&self, k: &[i32], j: usize) -> Complex64 {
        let n = self.n as usize;
        let kx = k.get(j).copied().unwrap_or(0) as f64;
        let ky = k.get(n + j).copied().unwrap_or(0) as f64;
        Complex64::new(ky / 2.0, kx / 2.0)
    }

    /// Frequency multiplier of `d/dzbar_j`.
    fn antiholo_multiplier(&self, k: &[i32], j: usize) -> Complex64 {
        let n = self.n as usize;
        let kx = k.get(j).copied().unwrap_or(0) as f64;
        let ky = k.get(n + j).copied().unwrap_or(0) as f64;
        Complex64::new(-ky / 2.0, kx / 2.0)
    }

    fn derive(&self, u: &Form, holo: bool) -> Result<Form, EngineError> {
        self.check_support(u)?;
        let mut out = Form::zero(self.n, RingKind::Fourier);
        for (elt, c) in u.iter() {
            let Scalar::Fourier(fs) = c else {
                return Err(EngineError::ModelMismatch("torus forms carry Fourier coefficients".into()));
            };
            for j in 0..self.n as usize {
                let mut deriv = FourierSum::zero();
                for (k, v) in &fs.terms {
                    let m = if holo {
                        self.holo_multiplier(k, j)
                    } else {
                        self.antiholo_multiplier(k, j)
                    };
                    let w = v * m;
                    if w != Complex64::new(0.0, 0.0) {
                        deriv.insert(k.clone(), w);
                    }
                }
                if deriv.is_zero() {
                    continue;
                }
                let cov = if holo {
                    BasisElement::new(alloc::vec![(j + 1) as u8], Vec::new())
                } else {
                    BasisElement::new(Vec::new(), alloc::vec![(j + 1) as u8])
                };
                if let Some((target, sign)) = basis::wedge_basis(&cov, elt) {
                    let mut s = Scalar::Fourier(deriv);
                    if sign < 0 {
                        s = s.neg();
                    }
                    out.add_to(target, &s);
                }
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report =
            ValidationReport { model: self.name.clone(), ok: true, checks: Vec::new() };
        report.push("positive dimension", self.n >= 1, None);
        report.push("positive frequency cutoff", self.cutoff >= 1, None);
        report
    }

    /// Maximum deviation between the spectral `delbar` of a function and a
    /// fourth-order central finite difference of its point values, sampled
    /// on a `grid x grid` lattice in each complex coordinate plane (the
    /// remaining coordinates sit at a fixed generic base point).
    pub fn delbar_fd_residual(&self, f: &Form, grid: usize, step: f64) -> Result<f64, EngineError> {
        use num_complex::Complex64;
        if f.pure_degree() != Some(0) {
            return Err(EngineError::DegreeError("finite differences apply to functions".into()));
        }
        let Scalar::Fourier(func) = f.coeff(&BasisElement::scalar()) else {
            return Err(EngineError::ModelMismatch("expected Fourier coefficients".into()));
        };
        let n = self.n as usize;
        let spectral = self.derive(f, false)?;
        let tau = core::f64::consts::TAU;
        let mut max_res = 0.0f64;
        for j in 0..n {
            let cov = BasisElement::new(Vec::new(), alloc::vec![(j + 1) as u8]);
            let coeff = spectral.coeff(&cov);
            let spectral_fn = match &coeff {
                Scalar::Fourier(s) => s.clone(),
                _ => crate::scalar::FourierSum::zero(),
            };
            for gx in 0..grid {
                for gy in 0..grid {
                    // generic base point, advancing the (x_j, y_j) plane
                    let mut theta: Vec<f64> = (0..2 * n).map(|idx| 0.37 + 0.61 * idx as f64).collect();
                    theta[j] = tau * (gx as f64) / (grid as f64);
                    theta[n + j] = tau * (gy as f64) / (grid as f64);
                    let eval = |dx: f64, dy: f64| -> Complex64 {
                        let mut t = theta.clone();
                        t[j] += dx;
                        t[n + j] += dy;
                        func.eval(&t)
                    };
                    // fourth-order central differences in x_j and y_j
                    let stencil = |g: &dyn Fn(f64) -> Complex64| -> Complex64 {
                        (-g(2.0 * step) + g(step) * 8.0 - g(-step) * 8.0 + g(-2.0 * step))
                            / (12.0 * step)
                    };
                    let fx = stencil(&|d| eval(d, 0.0));
                    let fy = stencil(&|d| eval(0.0, d));
                    // d/dzbar_j = (d/dx_j + i d/dy_j)/2
                    let fd = (fx + Complex64::new(0.0, 1.0) * fy) * 0.5;
                    let sp = spectral_fn.eval(&theta);
                    let res = (fd - sp).norm();
                    if res > max_res {
                        max_res = res;
                    }
                }
            }
        }
        Ok(max_res)
    }
}

/// A finite-dimensional differential bigraded algebra standing in for a
/// compact complex manifold.
#[derive(Clone)]
pub enum Model {
    Lie(LieModel),
    Torus(TorusModel),
}

impl Model {
    pub fn name(&self) -> &str {
        match self {
            Model::Lie(m) => &m.name,
            Model::Torus(m) => &m.name,
        }
    }

    pub fn n(&self) -> u8 {
        match self {
            Model::Lie(m) => m.n,
            Model::Torus(m) => m.n,
        }
    }

    pub fn ring(&self) -> RingKind {
        match self {
            Model::Lie(m) => m.ring,
            Model::Torus(_) => RingKind::Fourier,
        }
    }

    pub fn is_fourier(&self) -> bool {
        matches!(self, Model::Torus(_))
    }

    pub fn as_lie(&self) -> Option<&LieModel> {
        match self {
            Model::Lie(m) => Some(m),
            Model::Torus(_) => None,
        }
    }

    pub fn volume(&self) -> BigRational {
        match self {
            Model::Lie(m) => m.volume.clone(),
            Model::Torus(_) => BigRational::one(),
        }
    }

    fn check_form(&self, u: &Form) -> Result<(), EngineError> {
        if u.n != self.n() {
            return Err(EngineError::ModelMismatch(format!(
                "form dimension {} vs model dimension {}",
                u.n,
                self.n()
            )));
        }
        if u.ring != self.ring() {
            return Err(EngineError::ModelMismatch(format!(
                "form ring {} vs model ring {}",
                u.ring,
                self.ring()
            )));
        }
        Ok(())
    }

    pub fn del(&self, u: &Form) -> Result<Form, EngineError> {
        self.check_form(u)?;
        match self {
            Model::Lie(m) => Ok(m.del(u)),
            Model::Torus(m) => m.derive(u, true),
        }
    }

    pub fn delbar(&self, u: &Form) -> Result<Form, EngineError> {
        self.check_form(u)?;
        match self {
            Model::Lie(m) => Ok(m.delbar(u)),
            Model::Torus(m) => m.derive(u, false),
        }
    }

    pub fn d(&self, u: &Form) -> Result<Form, EngineError> {
        Ok(self.del(u)?.add(&self.delbar(u)?)?)
    }

    /// Integration over the model. Defined on forms of pure degree `2n`
    /// (and on 0, which integrates to 0). Normalized so that the identity
    /// metric has total volume 1: the coefficient of the canonical top
    /// basis element is divided by `i^{n^2}`.
    pub fn integrate(&self, u: &Form) -> Result<Scalar, EngineError> {
        self.check_form(u)?;
        if u.is_zero() {
            return Ok(Scalar::zero(self.ring()));
        }
        let top_degree = 2 * self.n() as usize;
        if u.pure_degree() != Some(top_degree) {
            return Err(EngineError::DegreeError(format!(
                "integration requires pure degree {top_degree}"
            )));
        }
        let top = BasisElement::top(self.n());
        let c = u.coeff(&top);
        // remove the i^{n^2} factor relating the top basis element to the
        // positive volume form, then apply the volume normalization
        let n2 = (self.n() as i64) * (self.n() as i64);
        let unit = GaussianRational::i_pow(-n2);
        let mut out = c.mul_rat(&unit);
        let vol = self.volume();
        if !vol.is_one() {
            out = out.mul_rat(&GaussianRational::new(vol, num_traits::Zero::zero()));
        }
        // a Fourier top form integrates to its constant term
        if let Scalar::Fourier(fs) = &out {
            out = Scalar::Float(fs.constant_term()).promote(RingKind::Fourier);
        }
        Ok(out)
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            Model::Lie(m) => m.validate(),
            Model::Torus(m) => m.validate(),
        }
    }
}
