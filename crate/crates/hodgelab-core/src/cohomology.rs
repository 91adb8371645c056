//! Quotient cohomology spaces (de Rham, Dolbeault, Bott-Chern, Aeppli) on
//! invariant Lie models, class arithmetic, exactness solvers with
//! certificates, duality pairings, and harmonic projections.
//!
//! Everything here is exact linear algebra over the model's coefficient
//! field. Non-membership claims are certified: the solver returns a
//! functional annihilating the image subspace and pairing nontrivially
//! with the candidate.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::basis::{self, BasisElement};
use crate::error::EngineError;
use crate::form::Form;
use crate::linalg::{self, Matrix};
use crate::model::Model;
use crate::operators::{DegreeSpec, HarmonicKind, Ops};
use crate::scalar::Scalar;

/// Cohomology flavor: de Rham by degree, the rest by bidegree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Flavor {
    DeRham(usize),
    Dolbeault(usize, usize),
    BottChern(usize, usize),
    Aeppli(usize, usize),
}

impl core::fmt::Display for Flavor {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Flavor::DeRham(k) => write!(f, "DR({k})"),
            Flavor::Dolbeault(p, q) => write!(f, "DOL({p},{q})"),
            Flavor::BottChern(p, q) => write!(f, "BC({p},{q})"),
            Flavor::Aeppli(p, q) => write!(f, "A({p},{q})"),
        }
    }
}

/// A computed quotient space: independent representatives plus the image
/// subspace used for reduction to coordinates.
#[derive(Clone)]
pub struct CohomologySpace {
    pub flavor: Flavor,
    pub reps: Vec<Form>,
    dom: Vec<BasisElement>,
    image_cols: Matrix,
}

impl CohomologySpace {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }
}

fn require_lie(model: &Model) -> Result<(), EngineError> {
    if model.as_lie().is_none() {
        return Err(EngineError::Config(
            "cohomology spaces are computed on invariant Lie models".to_string(),
        ));
    }
    Ok(())
}

/// Matrix of a model operator between monomial bases.
pub(crate) fn operator_matrix(
    model: &Model,
    op: &dyn Fn(&Form) -> Result<Form, EngineError>,
    basis_in: &[BasisElement],
    basis_out: &[BasisElement],
) -> Result<Matrix, EngineError> {
    let mut cols = Vec::new();
    for elt in basis_in {
        let e = Form::monomial(model.n(), elt.clone(), Scalar::one(model.ring()));
        cols.push(linalg::form_to_vector(basis_out, &op(&e)?));
    }
    Ok(Matrix::from_columns(basis_out.len(), model.ring(), &cols))
}

fn domain_basis(model: &Model, flavor: Flavor) -> Vec<BasisElement> {
    match flavor {
        Flavor::DeRham(k) => basis::basis_of_degree(model.n(), k),
        Flavor::Dolbeault(p, q) | Flavor::BottChern(p, q) | Flavor::Aeppli(p, q) => {
            basis::basis_of_bidegree(model.n(), p, q)
        }
    }
}

fn stack_blocks(blocks: Vec<Matrix>, cols: usize, ring: crate::scalar::RingKind) -> Matrix {
    let rows: usize = blocks.iter().map(|m| m.rows).sum();
    let mut stacked = Matrix::zero(rows, cols, ring);
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
    stacked
}

/// Closedness (stacked kernel conditions) and image-column matrices
/// defining the quotient for a flavor.
fn quotient_data(model: &Model, flavor: Flavor) -> Result<(Matrix, Matrix), EngineError> {
    let n = model.n();
    let dom = domain_basis(model, flavor);
    let full = basis::full_basis(n);
    let d = |u: &Form| model.d(u);
    let del = |u: &Form| model.del(u);
    let delbar = |u: &Form| model.delbar(u);
    let deldelbar = |u: &Form| model.del(&model.delbar(u)?);
    let kernel_ops: Vec<&dyn Fn(&Form) -> Result<Form, EngineError>> = match flavor {
        Flavor::DeRham(_) => alloc::vec![&d as _],
        Flavor::Dolbeault(..) => alloc::vec![&delbar as _],
        Flavor::BottChern(..) => alloc::vec![&del as _, &delbar as _],
        Flavor::Aeppli(..) => alloc::vec![&deldelbar as _],
    };
    let mut blocks = Vec::new();
    for op in kernel_ops {
        blocks.push(operator_matrix(model, op, &dom, &full)?);
    }
    let closed = stack_blocks(blocks, dom.len(), model.ring());

    let image = match flavor {
        Flavor::DeRham(k) => {
            if k == 0 {
                Matrix::zero(dom.len(), 0, model.ring())
            } else {
                let src = basis::basis_of_degree(n, k - 1);
                operator_matrix(model, &d, &src, &dom)?
            }
        }
        Flavor::Dolbeault(p, q) => {
            if q == 0 {
                Matrix::zero(dom.len(), 0, model.ring())
            } else {
                let src = basis::basis_of_bidegree(n, p, q - 1);
                operator_matrix(model, &delbar, &src, &dom)?
            }
        }
        Flavor::BottChern(p, q) => {
            if p == 0 || q == 0 {
                Matrix::zero(dom.len(), 0, model.ring())
            } else {
                let src = basis::basis_of_bidegree(n, p - 1, q - 1);
                operator_matrix(model, &deldelbar, &src, &dom)?
            }
        }
        Flavor::Aeppli(p, q) => {
            let mut cols: Vec<Vec<Scalar>> = Vec::new();
            if p > 0 {
                let src = basis::basis_of_bidegree(n, p - 1, q);
                let m = operator_matrix(model, &del, &src, &dom)?;
                for c in 0..m.cols {
                    cols.push(m.column(c));
                }
            }
            if q > 0 {
                let src = basis::basis_of_bidegree(n, p, q - 1);
                let m = operator_matrix(model, &delbar, &src, &dom)?;
                for c in 0..m.cols {
                    cols.push(m.column(c));
                }
            }
            Matrix::from_columns(dom.len(), model.ring(), &cols)
        }
    };
    Ok((closed, image))
}

/// Computes the quotient space with deterministic representatives:
/// kernel vectors (canonical order) that extend the image to a basis.
pub fn compute_space(model: &Model, flavor: Flavor) -> Result<CohomologySpace, EngineError> {
    require_lie(model)?;
    let dom = domain_basis(model, flavor);
    let (closed, image) = quotient_data(model, flavor)?;
    let kernel = closed.nullspace();
    let kernel_mat = Matrix::from_columns(dom.len(), model.ring(), &kernel);
    let chosen = kernel_mat.independent_columns_mod(&image);
    let reps: Vec<Form> = chosen
        .iter()
        .map(|&c| linalg::vector_to_form(model.n(), model.ring(), &dom, &kernel[c]))
        .collect();
    Ok(CohomologySpace { flavor, reps, dom, image_cols: image })
}

impl CohomologySpace {
    /// Coordinates of a closed form's class in this space's basis.
    pub fn class_coordinates(&self, model: &Model, u: &Form) -> Result<Vec<Scalar>, EngineError> {
        let ring = model.ring();
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for r in &self.reps {
            cols.push(linalg::form_to_vector(&self.dom, r));
        }
        for c in 0..self.image_cols.cols {
            cols.push(self.image_cols.column(c));
        }
        let m = Matrix::from_columns(self.dom.len(), ring, &cols);
        let b = linalg::form_to_vector(&self.dom, u);
        let x = m.solve(&b).ok_or_else(|| {
            EngineError::ClosednessViolation(format!(
                "form is not a cycle for flavor {}",
                self.flavor
            ))
        })?;
        Ok(x[..self.reps.len()].to_vec())
    }

    /// Distinguished representative of the class of `u` (the basis
    /// combination of the stored representatives).
    pub fn project_class(&self, model: &Model, u: &Form) -> Result<Form, EngineError> {
        let coords = self.class_coordinates(model, u)?;
        self.form_from_coords(model, &coords)
    }

    pub fn form_from_coords(&self, model: &Model, coords: &[Scalar]) -> Result<Form, EngineError> {
        if coords.len() != self.reps.len() {
            return Err(EngineError::Config("coordinate length mismatch".into()));
        }
        let mut out = Form::zero(model.n(), model.ring());
        for (c, r) in coords.iter().zip(self.reps.iter()) {
            out = out.add(&r.scale(c)?)?;
        }
        Ok(out)
    }
}

/// Exactness flavors for the membership solver.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExactnessFlavor {
    D,
    Del,
    Delbar,
    DelDelbar,
    DelPlusDelbar,
}

/// Result of an exactness solve: either witnesses (least-norm, hence
/// deterministic) or a certifying functional `z` with `<image, z> = 0`
/// and `<u, z> != 0` in the coefficient inner product.
#[derive(Clone, Debug)]
pub enum ExactnessResult {
    Exact(Vec<Form>),
    NotExact(Form),
}

impl ExactnessResult {
    pub fn is_exact(&self) -> bool {
        matches!(self, ExactnessResult::Exact(_))
    }

    pub fn witnesses(&self) -> Option<&[Form]> {
        match self {
            ExactnessResult::Exact(w) => Some(w),
            ExactnessResult::NotExact(_) => None,
        }
    }
}

/// Decides membership of `u` in the image of the requested operator,
/// producing a least-norm witness or a certificate of non-membership.
pub fn is_exact(
    model: &Model,
    u: &Form,
    flavor: ExactnessFlavor,
) -> Result<ExactnessResult, EngineError> {
    require_lie(model)?;
    let full = basis::full_basis(model.n());
    let ring = model.ring();
    let d = |v: &Form| model.d(v);
    let del = |v: &Form| model.del(v);
    let delbar = |v: &Form| model.delbar(v);
    let deldelbar = |v: &Form| model.del(&model.delbar(v)?);
    let b = linalg::form_to_vector(&full, u);
    let single = |op: &dyn Fn(&Form) -> Result<Form, EngineError>| -> Result<ExactnessResult, EngineError> {
        let m = operator_matrix(model, op, &full, &full)?;
        match m.least_norm_solve(&b) {
            Some(x) => {
                let w = linalg::vector_to_form(model.n(), ring, &full, &x);
                Ok(ExactnessResult::Exact(alloc::vec![w]))
            }
            None => {
                let z = m.cokernel_certificate(&b).expect("consistent system or certificate");
                Ok(ExactnessResult::NotExact(linalg::vector_to_form(model.n(), ring, &full, &z)))
            }
        }
    };
    match flavor {
        ExactnessFlavor::D => single(&d),
        ExactnessFlavor::Del => single(&del),
        ExactnessFlavor::Delbar => single(&delbar),
        ExactnessFlavor::DelDelbar => single(&deldelbar),
        ExactnessFlavor::DelPlusDelbar => {
            let m_del = operator_matrix(model, &del, &full, &full)?;
            let m_delbar = operator_matrix(model, &delbar, &full, &full)?;
            let mut cols = Vec::new();
            for c in 0..m_del.cols {
                cols.push(m_del.column(c));
            }
            for c in 0..m_delbar.cols {
                cols.push(m_delbar.column(c));
            }
            let m = Matrix::from_columns(full.len(), ring, &cols);
            match m.least_norm_solve(&b) {
                Some(x) => {
                    let a = linalg::vector_to_form(model.n(), ring, &full, &x[..full.len()]);
                    let bb = linalg::vector_to_form(model.n(), ring, &full, &x[full.len()..]);
                    Ok(ExactnessResult::Exact(alloc::vec![a, bb]))
                }
                None => {
                    let z = m.cokernel_certificate(&b).expect("consistent system or certificate");
                    Ok(ExactnessResult::NotExact(linalg::vector_to_form(
                        model.n(),
                        ring,
                        &full,
                        &z,
                    )))
                }
            }
        }
    }
}

/// Verifies a non-membership certificate: the functional must annihilate
/// the whole image and pair nontrivially with `u` (coefficient pairing).
pub fn check_certificate(
    model: &Model,
    u: &Form,
    flavor: ExactnessFlavor,
    z: &Form,
) -> Result<bool, EngineError> {
    let full = basis::full_basis(model.n());
    let zv = linalg::form_to_vector(&full, z);
    let uv = linalg::form_to_vector(&full, u);
    if linalg::dot_conj(&uv, &zv).is_zero() {
        return Ok(false);
    }
    let d = |v: &Form| model.d(v);
    let del = |v: &Form| model.del(v);
    let delbar = |v: &Form| model.delbar(v);
    let deldelbar = |v: &Form| model.del(&model.delbar(v)?);
    let ops: Vec<&dyn Fn(&Form) -> Result<Form, EngineError>> = match flavor {
        ExactnessFlavor::D => alloc::vec![&d as _],
        ExactnessFlavor::Del => alloc::vec![&del as _],
        ExactnessFlavor::Delbar => alloc::vec![&delbar as _],
        ExactnessFlavor::DelDelbar => alloc::vec![&deldelbar as _],
        ExactnessFlavor::DelPlusDelbar => alloc::vec![&del as _, &delbar as _],
    };
    for op in ops {
        for elt in &full {
            let e = Form::monomial(model.n(), elt.clone(), Scalar::one(model.ring()));
            let img = op(&e)?;
            let iv = linalg::form_to_vector(&full, &img);
            if !linalg::dot_conj(&iv, &zv).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Wedge-and-integrate pairing of two representatives of complementary
/// (bi)degree.
pub fn pairing(model: &Model, a: &Form, b: &Form) -> Result<Scalar, EngineError> {
    let w = a.wedge(b)?;
    if w.is_zero() {
        return Ok(Scalar::zero(model.ring()));
    }
    if w.pure_degree() != Some(2 * model.n() as usize) {
        return Err(EngineError::DegreeError("pairing requires complementary degrees".to_string()));
    }
    model.integrate(&w)
}

/// Flavors of the orthogonal harmonic decomposition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProjectionFlavor {
    /// `u` d-closed: `u = h + d gamma`.
    DrClosed,
    /// `u` d-star-closed: `u = h + d* eta`.
    DrCoclosed,
    /// arbitrary `u`: `u = h + d gamma + d* eta`.
    DrFull,
    /// `u` in `ker (del delbar)^*`: `u = h_BC + del* a + delbar* b`.
    BcCoclosed,
    /// `u` in `ker (del delbar)`: `u = h_A + del a + delbar b`.
    AClosed,
}

/// Result of a harmonic projection: the harmonic part, the operator images
/// (one per potential), and the least-norm potentials themselves.
#[derive(Clone, Debug)]
pub struct Projection {
    pub harmonic: Form,
    pub parts: Vec<Form>,
    pub potentials: Vec<Form>,
}

impl Projection {
    pub fn reassemble(&self) -> Result<Form, EngineError> {
        let mut out = self.harmonic.clone();
        for p in &self.parts {
            out = out.add(p)?;
        }
        Ok(out)
    }
}

/// Orthogonal decomposition of `u` with respect to the flavor's
/// three-space splitting. The closedness precondition is checked exactly.
pub fn harmonic_projection(
    ops: &Ops<'_>,
    u: &Form,
    flavor: ProjectionFlavor,
) -> Result<Projection, EngineError> {
    let model = ops.model;
    require_lie(model)?;
    let n = model.n();
    let ring = model.ring();
    let full = basis::full_basis(n);

    type PotOp<'s> = alloc::boxed::Box<dyn Fn(&Form) -> Result<Form, EngineError> + 's>;
    let (pre_ok, hbasis, pot_ops): (bool, Vec<Form>, Vec<PotOp>) = match flavor {
        ProjectionFlavor::DrClosed | ProjectionFlavor::DrCoclosed | ProjectionFlavor::DrFull => {
            let k = u.pure_degree().ok_or_else(|| {
                EngineError::DegreeError("projection needs a pure-degree form".into())
            })?;
            let h = ops.harmonic_basis(&HarmonicKind::D, DegreeSpec::Degree(k))?;
            let pre = match flavor {
                ProjectionFlavor::DrClosed => ops.d(u)?.is_zero(),
                ProjectionFlavor::DrCoclosed => ops.d_star(u)?.is_zero(),
                _ => true,
            };
            let mut fs: Vec<PotOp> = Vec::new();
            if matches!(flavor, ProjectionFlavor::DrClosed | ProjectionFlavor::DrFull) {
                fs.push(alloc::boxed::Box::new(move |v: &Form| ops.d(v)));
            }
            if matches!(flavor, ProjectionFlavor::DrCoclosed | ProjectionFlavor::DrFull) {
                fs.push(alloc::boxed::Box::new(move |v: &Form| ops.d_star(v)));
            }
            (pre, h, fs)
        }
        ProjectionFlavor::BcCoclosed => {
            let (p, q) = u.pure_bidegree().ok_or_else(|| {
                EngineError::DegreeError("projection needs a pure-bidegree form".into())
            })?;
            let h = ops.harmonic_basis(&HarmonicKind::BottChern, DegreeSpec::Bidegree(p, q))?;
            let pre = ops.delbar_star(&ops.del_star(u)?)?.is_zero();
            (
                pre,
                h,
                alloc::vec![
                    alloc::boxed::Box::new(move |v: &Form| ops.del_star(v)) as PotOp,
                    alloc::boxed::Box::new(move |v: &Form| ops.delbar_star(v)) as PotOp,
                ],
            )
        }
        ProjectionFlavor::AClosed => {
            let (p, q) = u.pure_bidegree().ok_or_else(|| {
                EngineError::DegreeError("projection needs a pure-bidegree form".into())
            })?;
            let h = ops.harmonic_basis(&HarmonicKind::Aeppli, DegreeSpec::Bidegree(p, q))?;
            let pre = ops.del(&ops.delbar(u)?)?.is_zero();
            (
                pre,
                h,
                alloc::vec![
                    alloc::boxed::Box::new(move |v: &Form| ops.del(v)) as PotOp,
                    alloc::boxed::Box::new(move |v: &Form| ops.delbar(v)) as PotOp,
                ],
            )
        }
    };
    if !pre_ok {
        return Err(EngineError::ClosednessViolation(format!(
            "input does not satisfy the {flavor:?} precondition"
        )));
    }

    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for h in &hbasis {
        cols.push(linalg::form_to_vector(&full, h));
    }
    let mut op_col_ranges = Vec::new();
    for f in &pot_ops {
        let start = cols.len();
        let m = operator_matrix(model, f.as_ref(), &full, &full)?;
        for c in 0..m.cols {
            cols.push(m.column(c));
        }
        op_col_ranges.push((start, cols.len()));
    }
    let m = Matrix::from_columns(full.len(), ring, &cols);
    let b = linalg::form_to_vector(&full, u);
    let x = m
        .least_norm_solve(&b)
        .ok_or_else(|| EngineError::ClosednessViolation("projection solve failed".into()))?;

    let mut harmonic = Form::zero(n, ring);
    for (idx, h) in hbasis.iter().enumerate() {
        harmonic = harmonic.add(&h.scale(&x[idx])?)?;
    }
    let mut parts = Vec::new();
    let mut potentials = Vec::new();
    for (f, (start, end)) in pot_ops.iter().zip(op_col_ranges) {
        let pot = linalg::vector_to_form(n, ring, &full, &x[start..end]);
        parts.push(f(&pot)?);
        potentials.push(pot);
    }
    Ok(Projection { harmonic, parts, potentials })
}
