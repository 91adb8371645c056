//! Dense linear algebra over a single coefficient ring.
//!
//! On the rational ring every decision (rank, membership, kernels) is exact;
//! on the float ring pivots are compared against a scaled threshold. Spaces
//! here are small (dimensions of model form spaces), so plain Gaussian
//! elimination is enough.

use alloc::vec;
use alloc::vec::Vec;

use crate::basis::BasisElement;
use crate::form::Form;
use crate::scalar::{RingKind, Scalar};

const FLOAT_PIVOT_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub ring: RingKind,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, ring: RingKind) -> Self {
        Matrix { rows, cols, ring, data: vec![Scalar::zero(ring); rows * cols] }
    }

    pub fn identity(nd: usize, ring: RingKind) -> Self {
        let mut m = Matrix::zero(nd, nd, ring);
        for k in 0..nd {
            m.set(k, k, Scalar::one(ring));
        }
        m
    }

    pub fn from_columns(rows: usize, ring: RingKind, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zero(rows, cols.len(), ring);
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.max_abs()).fold(0.0, f64::max)
    }

    fn zero_tol(&self) -> f64 {
        match self.ring {
            RingKind::Rational => 0.0,
            _ => {
                let scale = self.max_abs();
                FLOAT_PIVOT_TOL * if scale > 1.0 { scale } else { 1.0 }
            }
        }
    }

    fn effectively_zero(v: &Scalar, tol: f64) -> bool {
        if tol == 0.0 {
            v.is_zero()
        } else {
            v.max_abs() <= tol
        }
    }

    /// Conjugate transpose.
    pub fn hermitian_transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows, self.ring);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols, self.ring);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).add(&a.mul(b).unwrap()).unwrap();
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Scalar::zero(self.ring); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if a.is_zero() || v[c].is_zero() {
                    continue;
                }
                out[r] = out[r].add(&a.mul(&v[c]).unwrap()).unwrap();
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = Matrix::zero(self.rows, self.cols, self.ring);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).sub(other.get(r, c)).unwrap());
            }
        }
        out
    }

    pub fn is_zero_with_tol(&self, tol: f64) -> bool {
        self.data.iter().all(|v| Self::effectively_zero(v, tol))
    }

    /// Reduced row echelon form; returns pivot column indices.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let tol = self.zero_tol();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            // pick a pivot: first non-negligible entry (exact ring) or the
            // largest one (float ring)
            let mut best: Option<usize> = None;
            for r in row..self.rows {
                if !Self::effectively_zero(self.get(r, col), tol) {
                    match self.ring {
                        RingKind::Rational => {
                            best = Some(r);
                            break;
                        }
                        _ => {
                            if best.map_or(true, |b| {
                                self.get(r, col).max_abs() > self.get(b, col).max_abs()
                            }) {
                                best = Some(r);
                            }
                        }
                    }
                }
            }
            let Some(prow) = best else { continue };
            // swap
            if prow != row {
                for c in 0..self.cols {
                    let a = self.get(row, c).clone();
                    let b = self.get(prow, c).clone();
                    self.set(row, c, b);
                    self.set(prow, c, a);
                }
            }
            // normalize pivot row
            let pinv = self.get(row, col).inv().expect("nonzero pivot");
            for c in col..self.cols {
                let v = self.get(row, c).mul(&pinv).unwrap();
                self.set(row, c, v);
            }
            // eliminate everywhere else
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = self.get(r, c).sub(&factor.mul(self.get(row, c)).unwrap()).unwrap();
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref_in_place().len()
    }

    /// Basis of the right nullspace, one vector per free column, in
    /// ascending free-column order.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut work = self.clone();
        let pivots = work.rref_in_place();
        let tol = work.zero_tol();
        let mut out = Vec::new();
        let is_pivot = |c: usize| pivots.contains(&c);
        for free in 0..self.cols {
            if is_pivot(free) {
                continue;
            }
            let mut v = vec![Scalar::zero(self.ring); self.cols];
            v[free] = Scalar::one(self.ring);
            for (prow, pcol) in pivots.iter().enumerate() {
                let entry = work.get(prow, free);
                if !Self::effectively_zero(entry, tol) {
                    v[*pcol] = entry.clone().neg();
                }
            }
            out.push(v);
        }
        out
    }

    /// A particular solution of `A x = b` with free variables set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut work = Matrix::zero(self.rows, self.cols + 1, self.ring);
        for r in 0..self.rows {
            for c in 0..self.cols {
                work.set(r, c, self.get(r, c).clone());
            }
            work.set(r, self.cols, b[r].clone());
        }
        let pivots = work.rref_in_place();
        let tol = work.zero_tol();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![Scalar::zero(self.ring); self.cols];
        for (prow, pcol) in pivots.iter().enumerate() {
            let v = work.get(prow, self.cols).clone();
            if !Self::effectively_zero(&v, tol) {
                x[*pcol] = v;
            }
        }
        Some(x)
    }

    /// The minimum-norm solution of `A x = b` (standard coefficient inner
    /// product): `x = A^H y` with `A A^H y = b`. Unique whenever `b` lies in
    /// the column space; `None` otherwise.
    pub fn least_norm_solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let ah = self.hermitian_transpose();
        let aah = self.mul(&ah);
        let y = aah.solve(b)?;
        let x = ah.mul_vec(&y);
        // consistency of A A^H y = b does not yet guarantee b in Im A on the
        // float ring; verify the residual
        let res = self.mul_vec(&x);
        let tol = self.zero_tol();
        for (r, bi) in b.iter().enumerate() {
            if !Self::effectively_zero(&res[r].sub(bi).unwrap(), tol.max(FLOAT_PIVOT_TOL * 0.0)) {
                if self.ring == RingKind::Rational {
                    return None;
                }
                let scale = 1.0f64.max(self.max_abs());
                if res[r].sub(bi).unwrap().max_abs() > FLOAT_PIVOT_TOL * scale {
                    return None;
                }
            }
        }
        Some(x)
    }

    /// A functional certifying `b` is not in the column space: a vector `z`
    /// with `A^H z = 0` and `<b, z> != 0`. Returns `None` when `b` is in the
    /// column space.
    pub fn cokernel_certificate(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let ah = self.hermitian_transpose();
        for z in ah.nullspace() {
            let p = dot_conj(b, &z);
            if !Matrix::effectively_zero(&p, self.zero_tol()) {
                return Some(z);
            }
        }
        None
    }

    /// Greedy selection of columns that are independent modulo the span of
    /// `base` (processed in ascending column order).
    pub fn independent_columns_mod(&self, base: &Matrix) -> Vec<usize> {
        assert_eq!(self.rows, base.rows);
        let mut kept: Vec<usize> = Vec::new();
        let mut current = base.clone();
        let mut rank = current.rank();
        for c in 0..self.cols {
            let mut trial = Matrix::zero(self.rows, current.cols + 1, self.ring);
            for r in 0..self.rows {
                for cc in 0..current.cols {
                    trial.set(r, cc, current.get(r, cc).clone());
                }
                trial.set(r, current.cols, self.get(r, c).clone());
            }
            let new_rank = trial.rank();
            if new_rank > rank {
                kept.push(c);
                current = trial;
                rank = new_rank;
            }
        }
        kept
    }
}

/// `sum_i u_i * conj(v_i)`.
pub fn dot_conj(u: &[Scalar], v: &[Scalar]) -> Scalar {
    assert_eq!(u.len(), v.len());
    let ring = u.first().map(|s| s.ring()).unwrap_or(RingKind::Rational);
    let mut acc = Scalar::zero(ring);
    for (a, b) in u.iter().zip(v.iter()) {
        acc = acc.add(&a.mul(&b.conj()).unwrap()).unwrap();
    }
    acc
}

/// Coefficient vector of `form` relative to `basis` (entries not in the basis
/// must be absent from the form).
pub fn form_to_vector(basis: &[BasisElement], form: &Form) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(form.ring); basis.len()];
    for (elt, c) in form.iter() {
        match basis.iter().position(|b| b == elt) {
            Some(idx) => v[idx] = c.clone(),
            None => panic!("form support {elt} outside the provided basis"),
        }
    }
    v
}

pub fn vector_to_form(n: u8, ring: RingKind, basis: &[BasisElement], v: &[Scalar]) -> Form {
    let mut f = Form::zero(n, ring);
    for (idx, c) in v.iter().enumerate() {
        if !c.is_zero() {
            f.add_to(basis[idx].clone(), c);
        }
    }
    f
}

pub fn forms_to_matrix(ring: RingKind, basis: &[BasisElement], forms: &[Form]) -> Matrix {
    let cols: Vec<Vec<Scalar>> = forms.iter().map(|f| form_to_vector(basis, f)).collect();
    Matrix::from_columns(basis.len(), ring, &cols)
}
