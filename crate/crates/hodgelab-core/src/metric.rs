//! Hermitian metrics and the inner products they induce.
//!
//! The native representation is a positive diagonal in the model coframe,
//! with exact rational entries. General positive-definite Hermitian
//! matrices are admitted at the manifest layer by a triangular change of
//! coframe that reduces them to the identity diagonal (see
//! [`crate::model`] and the manifest loader), at the cost of float
//! coefficients.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::EngineError;
use crate::form::Form;
use crate::model::Model;
use crate::scalar::{GaussianRational, RingKind, Scalar};
use crate::basis::BasisElement;

/// A Hermitian metric `omega = i sum_j a_j e^j /\ ebar^j` with positive
/// rational diagonal entries `a_j`.
#[derive(Clone, PartialEq)]
pub struct Metric {
    pub name: String,
    pub n: u8,
    diag: Vec<BigRational>,
}

impl Metric {
    pub fn new(name: &str, n: u8, diag: Vec<BigRational>) -> Result<Self, EngineError> {
        if diag.len() != n as usize {
            return Err(EngineError::MetricMismatch(alloc::format!(
                "expected {n} diagonal entries, got {}",
                diag.len()
            )));
        }
        if diag.iter().any(|a| !a.is_positive()) {
            return Err(EngineError::MetricMismatch(
                "diagonal entries must be positive".to_string(),
            ));
        }
        Ok(Metric { name: name.to_string(), n, diag })
    }

    pub fn diagonal(name: &str, n: u8, entries: &[(i64, i64)]) -> Result<Self, EngineError> {
        let diag = entries
            .iter()
            .map(|(p, q)| BigRational::new(BigInt::from(*p), BigInt::from(*q)))
            .collect();
        Metric::new(name, n, diag)
    }

    pub fn identity(n: u8) -> Self {
        Metric::new("id", n, (0..n).map(|_| BigRational::one()).collect()).unwrap()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.diag
    }

    /// The metric scaled by a positive rational factor.
    pub fn scaled(&self, name: &str, factor: &BigRational) -> Result<Self, EngineError> {
        Metric::new(name, self.n, self.diag.iter().map(|a| a * factor).collect())
    }

    /// Product of the diagonal entries; the total volume of the model under
    /// the unit normalization.
    pub fn volume_factor(&self) -> BigRational {
        self.diag.iter().fold(BigRational::one(), |acc, a| acc * a)
    }

    /// The fundamental form in the requested coefficient ring.
    pub fn omega(&self, ring: RingKind) -> Form {
        let mut w = Form::zero(self.n, RingKind::Rational);
        for (idx, a) in self.diag.iter().enumerate() {
            let k = (idx + 1) as u8;
            let c = GaussianRational::new(BigRational::zero(), a.clone());
            w.add_to(
                BasisElement::new(alloc::vec![k], alloc::vec![k]),
                &Scalar::Rational(c),
            );
        }
        w.promote(ring)
    }

    /// `omega_r = omega^r / r!`, computed exactly and promoted.
    pub fn omega_power(&self, ring: RingKind, r: usize) -> Result<Form, EngineError> {
        if r > self.n as usize {
            return Err(EngineError::RangeError(alloc::format!(
                "omega power {r} exceeds dimension {}",
                self.n
            )));
        }
        let omega = self.omega(RingKind::Rational);
        let mut acc = Form::one(self.n, RingKind::Rational);
        let mut factorial = BigRational::one();
        for step in 1..=r {
            acc = acc.wedge(&omega)?;
            factorial *= BigRational::from_integer(BigInt::from(step as i64));
        }
        let scale = GaussianRational::new(factorial.recip(), BigRational::zero());
        Ok(acc.scale_rat(&scale).promote(ring))
    }

    /// Squared norm of a basis monomial under the induced inner product:
    /// the product of the inverse diagonal entries over its indices.
    pub fn weight(&self, elt: &BasisElement) -> BigRational {
        let mut w = BigRational::one();
        for &i in &elt.i {
            w /= &self.diag[(i - 1) as usize];
        }
        for &j in &elt.j {
            w /= &self.diag[(j - 1) as usize];
        }
        w
    }

    /// Pointwise Hermitian inner product `<u, v>`, conjugate-linear in the
    /// second slot. Basis monomials are mutually orthogonal; mixed
    /// bidegrees are orthogonal. On the Fourier ring the result is the
    /// pointwise product function.
    pub fn inner(&self, u: &Form, v: &Form) -> Result<Scalar, EngineError> {
        if u.n != self.n || v.n != self.n {
            return Err(EngineError::MetricMismatch("dimension mismatch".to_string()));
        }
        if u.ring != v.ring {
            return Err(EngineError::MetricMismatch("ring mismatch".to_string()));
        }
        let mut acc = Scalar::zero(u.ring);
        for (elt, cu) in u.iter() {
            let cv = v.coeff(elt);
            if cv.is_zero() {
                continue;
            }
            let w = GaussianRational::new(self.weight(elt), BigRational::zero());
            let term = cu.mul(&cv.conj())?.mul_rat(&w);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// L2 inner product `<<u, v>> = integral of <u, v> against the volume
    /// form`. On invariant models this is the pointwise product times the
    /// metric volume; on the torus the mean of the product function times
    /// the metric volume.
    pub fn l2_inner(&self, model: &Model, u: &Form, v: &Form) -> Result<Scalar, EngineError> {
        let pw = self.inner(u, v)?;
        let vol = self.volume_factor() * model.volume();
        let vol = GaussianRational::new(vol, BigRational::zero());
        let mut out = pw.mul_rat(&vol);
        if let Scalar::Fourier(fs) = &out {
            out = Scalar::Float(fs.constant_term()).promote(RingKind::Fourier);
        }
        Ok(out)
    }

    pub fn norm_sq(&self, model: &Model, u: &Form) -> Result<Scalar, EngineError> {
        self.l2_inner(model, u, u)
    }

    /// Exact Gram-Schmidt orthogonalization (no normalization, which would
    /// leave the rational field). Zero vectors are dropped.
    pub fn orthogonalize(
        &self,
        model: &Model,
        forms: &[Form],
    ) -> Result<Vec<Form>, EngineError> {
        let mut out: Vec<Form> = Vec::new();
        for f in forms {
            let mut v = f.clone();
            for prev in &out {
                let num = self.l2_inner(model, &v, prev)?;
                let den = self.l2_inner(model, prev, prev)?;
                let coeff = num.mul(&den.inv()?)?;
                v = v.sub(&prev.scale(&coeff)?)?;
            }
            if !v.is_zero() {
                out.push(v);
            }
        }
        Ok(out)
    }
}

/// Reduces a positive-definite Hermitian metric matrix to the identity
/// diagonal by a triangular change of coframe, returning the rewritten
/// (float-ring) model and the identity metric on it. The exact diagonal
/// path stays untouched; this is the fuzzing entry for generic metrics.
pub fn reduce_hermitian(
    model: &crate::model::LieModel,
    h: &[Vec<num_complex::Complex64>],
) -> Result<(Model, Metric), EngineError> {
    use num_complex::Complex64;
    let n = model.n as usize;
    if h.len() != n || h.iter().any(|r| r.len() != n) {
        return Err(EngineError::MetricMismatch("hermitian matrix must be n x n".to_string()));
    }
    for r in 0..n {
        for c in 0..n {
            let delta = h[r][c] - h[c][r].conj();
            if delta.norm() > 1e-12 {
                return Err(EngineError::MetricMismatch("matrix is not Hermitian".to_string()));
            }
        }
    }
    // Cholesky of conj(H): R^H R = conj(H) with R upper triangular, so the
    // coframe f = R e turns omega into the identity diagonal.
    let a: Vec<Vec<Complex64>> =
        h.iter().map(|row| row.iter().map(|v| v.conj()).collect()).collect();
    let mut l = alloc::vec![alloc::vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        let mut diag = a[j][j];
        for k in 0..j {
            diag -= l[j][k] * l[j][k].conj();
        }
        if diag.re <= 0.0 || diag.im.abs() > 1e-12 {
            return Err(EngineError::MetricMismatch(
                "matrix is not positive definite".to_string(),
            ));
        }
        l[j][j] = Complex64::new(crate::scalar::sqrt_f64(diag.re), 0.0);
        for i in (j + 1)..n {
            let mut v = a[i][j];
            for k in 0..j {
                v -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = v / l[j][j];
        }
    }
    // conj(A) = L L^H; R = L^H is upper triangular with R^H R = conj(H)
    let mut r = alloc::vec![alloc::vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            r[i][j] = l[j][i].conj();
        }
    }
    let reduced = model.change_coframe(&alloc::format!("{}-reduced", model.name), &r)?;
    let metric = Metric::identity(model.n);
    Ok((Model::Lie(reduced), metric))
}

impl core::fmt::Debug for Metric {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Metric({} diag=[", self.name)?;
        for (i, a) in self.diag.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn omega_is_real_and_volume_normalized() {
        for n in [2u8, 3] {
            let m = Metric::identity(n);
            let w = m.omega(RingKind::Rational);
            assert!(w.is_real());
            let model = catalog::torus(n);
            let top = m.omega_power(RingKind::Rational, n as usize).unwrap();
            let vol = model.integrate(&top).unwrap();
            assert_eq!(vol, Scalar::Rational(GaussianRational::one()));
        }
    }

    #[test]
    fn omega_power_diag_1_2_3_integrates_to_6() {
        let m = Metric::diagonal("d", 3, &[(1, 1), (2, 1), (3, 1)]).unwrap();
        let model = catalog::torus(3);
        let top = m.omega_power(RingKind::Rational, 3).unwrap();
        let vol = model.integrate(&top).unwrap();
        assert_eq!(vol, Scalar::Rational(GaussianRational::from_int(6)));
    }

    #[test]
    fn omega_power_zero_is_one() {
        let m = Metric::identity(2);
        assert_eq!(m.omega_power(RingKind::Rational, 0).unwrap(), Form::one(2, RingKind::Rational));
        assert!(m.omega_power(RingKind::Rational, 3).is_err());
    }

    #[test]
    fn inner_orthonormal_coframe() {
        let m = Metric::identity(2);
        let e1 = Form::monomial(
            2,
            BasisElement::new(alloc::vec![1], alloc::vec![]),
            Scalar::Rational(GaussianRational::one()),
        );
        assert_eq!(m.inner(&e1, &e1).unwrap(), Scalar::Rational(GaussianRational::one()));
        // <omega, omega> = n
        let w = m.omega(RingKind::Rational);
        assert_eq!(m.inner(&w, &w).unwrap(), Scalar::Rational(GaussianRational::from_int(2)));
        // distinct monomials are orthogonal
        let a = Form::monomial(
            2,
            BasisElement::new(alloc::vec![1], alloc::vec![2]),
            Scalar::Rational(GaussianRational::one()),
        );
        let b = Form::monomial(
            2,
            BasisElement::new(alloc::vec![2], alloc::vec![1]),
            Scalar::Rational(GaussianRational::one()),
        );
        assert!(m.inner(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn hermitian_reduction_rebuilds_identity_metric() {
        use num_complex::Complex64;
        // H = [[2, i, 0], [-i, 2, 0], [0, 0, 1]] is positive definite
        let h = alloc::vec![
            alloc::vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
            alloc::vec![Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)],
            alloc::vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        let base = catalog::iwasawa();
        let lie = base.as_lie().unwrap();
        let (reduced, metric) = reduce_hermitian(lie, &h).unwrap();
        assert!(reduced.validate().ok, "reduced model fails validation");
        assert_eq!(metric.entries().len(), 3);
        // the commutation residuals stay within the float tolerance
        let ops = crate::operators::Ops::new(&reduced, &metric).unwrap();
        for (label, res, ok) in ops.hermitian_commutation_residuals().unwrap() {
            assert!(ok, "{label} residual {res} on the reduced model");
        }
        // non-Hermitian and non-positive inputs are rejected
        let bad = alloc::vec![
            alloc::vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            alloc::vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        let t2 = catalog::torus(2);
        assert!(reduce_hermitian(t2.as_lie().unwrap(), &bad).is_err());
    }

    #[test]
    fn inner_omega_omega_is_n_for_any_diagonal() {
        // expand omega in the orthonormal coframe: n diagonal terms
        for n in [2u8, 3] {
            let m = Metric::diagonal(
                "d",
                n,
                &(0..n).map(|k| (2 * k as i64 + 1, 3)).collect::<Vec<_>>(),
            )
            .unwrap();
            let w = m.omega(RingKind::Rational);
            assert_eq!(
                m.inner(&w, &w).unwrap(),
                Scalar::Rational(GaussianRational::from_int(n as i64))
            );
        }
    }
}
