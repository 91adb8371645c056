//! Sparse differential forms over a fixed coframe.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::basis::{self, BasisElement};
use crate::error::AlgebraError;
use crate::scalar::{GaussianRational, RingKind, Scalar};

/// A complex-valued form on an `n`-dimensional model, stored as a sparse
/// coefficient table over the monomial basis. Absent entries are zero and
/// stored scalars are never zero.
#[derive(Clone, PartialEq)]
pub struct Form {
    pub n: u8,
    pub ring: RingKind,
    coeffs: BTreeMap<BasisElement, Scalar>,
}

impl Form {
    pub fn zero(n: u8, ring: RingKind) -> Self {
        Form { n, ring, coeffs: BTreeMap::new() }
    }

    /// The constant function 1.
    pub fn one(n: u8, ring: RingKind) -> Self {
        let mut f = Form::zero(n, ring);
        f.set(BasisElement::scalar(), Scalar::one(ring));
        f
    }

    pub fn from_scalar(n: u8, s: Scalar) -> Self {
        let mut f = Form::zero(n, s.ring());
        f.set(BasisElement::scalar(), s);
        f
    }

    pub fn monomial(n: u8, elt: BasisElement, s: Scalar) -> Self {
        let mut f = Form::zero(n, s.ring());
        f.set(elt, s);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, elt: &BasisElement) -> Scalar {
        self.coeffs.get(elt).cloned().unwrap_or_else(|| Scalar::zero(self.ring))
    }

    pub fn set(&mut self, elt: BasisElement, s: Scalar) {
        debug_assert_eq!(s.ring(), self.ring);
        debug_assert!(elt.i.last().map_or(true, |&v| v <= self.n));
        debug_assert!(elt.j.last().map_or(true, |&v| v <= self.n));
        if s.is_zero() {
            self.coeffs.remove(&elt);
        } else {
            self.coeffs.insert(elt, s);
        }
    }

    pub fn add_to(&mut self, elt: BasisElement, s: &Scalar) {
        let cur = self.coeff(&elt);
        let sum = cur.add(s).expect("ring checked at construction");
        self.set(elt, sum);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisElement, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    fn check_compat(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.n != other.n {
            return Err(AlgebraError::DimensionMismatch { left: self.n, right: other.n });
        }
        if self.ring != other.ring {
            return Err(AlgebraError::RingMismatch { left: self.ring, right: other.ring });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (elt, s) in other.iter() {
            out.add_to(elt.clone(), s);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Form {
            n: self.n,
            ring: self.ring,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v.clone().neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Result<Self, AlgebraError> {
        if s.ring() != self.ring {
            return Err(AlgebraError::RingMismatch { left: self.ring, right: s.ring() });
        }
        let mut out = Form::zero(self.n, self.ring);
        for (elt, c) in self.iter() {
            out.add_to(elt.clone(), &c.mul(s)?);
        }
        Ok(out)
    }

    /// Exact scaling by a Gaussian rational, in any ring.
    pub fn scale_rat(&self, q: &GaussianRational) -> Self {
        let mut out = Form::zero(self.n, self.ring);
        for (elt, c) in self.iter() {
            out.add_to(elt.clone(), &c.mul_rat(q));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compat(other)?;
        let mut out = Form::zero(self.n, self.ring);
        for (ea, ca) in self.iter() {
            for (eb, cb) in other.iter() {
                if let Some((elt, sign)) = basis::wedge_basis(ea, eb) {
                    let mut c = ca.mul(cb)?;
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.add_to(elt, &c);
                }
            }
        }
        Ok(out)
    }

    /// Complex conjugation; maps bidegree `(p,q)` to `(q,p)`.
    pub fn conjugate(&self) -> Self {
        let mut out = Form::zero(self.n, self.ring);
        for (elt, c) in self.iter() {
            let target = BasisElement::new(elt.j.clone(), elt.i.clone());
            let mut s = c.conj();
            if basis::conj_sign(elt) < 0 {
                s = s.neg();
            }
            out.add_to(target, &s);
        }
        out
    }

    /// A form is real when it is fixed by conjugation.
    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// Projection onto bidegree `(p, q)`.
    pub fn component(&self, p: usize, q: usize) -> Self {
        let mut out = Form::zero(self.n, self.ring);
        for (elt, c) in self.iter() {
            if elt.bidegree() == (p, q) {
                out.set(elt.clone(), c.clone());
            }
        }
        out
    }

    /// Projection onto total degree `k`.
    pub fn degree_component(&self, k: usize) -> Self {
        let mut out = Form::zero(self.n, self.ring);
        for (elt, c) in self.iter() {
            if elt.degree() == k {
                out.set(elt.clone(), c.clone());
            }
        }
        out
    }

    /// The bidegrees present in the support.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for elt in self.coeffs.keys() {
            let b = elt.bidegree();
            if !out.contains(&b) {
                out.push(b);
            }
        }
        out
    }

    /// Total degree if the form is homogeneous (the zero form reports `Some(0)`).
    pub fn pure_degree(&self) -> Option<usize> {
        let mut deg = None;
        for elt in self.coeffs.keys() {
            match deg {
                None => deg = Some(elt.degree()),
                Some(d) if d == elt.degree() => {}
                _ => return None,
            }
        }
        Some(deg.unwrap_or(0))
    }

    /// Bidegree if the form is pure-type.
    pub fn pure_bidegree(&self) -> Option<(usize, usize)> {
        let mut bi = None;
        for elt in self.coeffs.keys() {
            match bi {
                None => bi = Some(elt.bidegree()),
                Some(b) if b == elt.bidegree() => {}
                _ => return None,
            }
        }
        bi
    }

    /// Largest coefficient modulus; the residual norm used in reports.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    /// Canonical textual serialization: one line per basis element, in
    /// canonical basis order, `I|J : coefficient`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (elt, c) in self.iter() {
            out.push_str(&elt.serialize());
            out.push_str(" : ");
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the canonical textual serialization (exact ring only).
    pub fn parse(n: u8, text: &str) -> Result<Self, AlgebraError> {
        let mut out = Form::zero(n, RingKind::Rational);
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (eltpart, coeffpart) =
                line.split_once(':').ok_or_else(|| AlgebraError::Parse(line.to_string()))?;
            let elt = BasisElement::parse(eltpart.trim(), n)?;
            let c = crate::scalar::parse_gaussian(coeffpart.trim())?;
            out.add_to(elt, &Scalar::Rational(c));
        }
        Ok(out)
    }

    /// Explicit promotion of every coefficient into `ring`.
    pub fn promote(&self, ring: RingKind) -> Self {
        let mut out = Form::zero(self.n, ring);
        for (elt, c) in self.iter() {
            out.add_to(elt.clone(), &c.clone().promote(ring));
        }
        out
    }

    /// Splits a Fourier-ring form into float-ring forms, one per frequency.
    /// Constant-coefficient operations act frequency by frequency.
    pub fn split_frequencies(&self) -> Vec<(Vec<i32>, Form)> {
        assert_eq!(self.ring, RingKind::Fourier);
        let mut parts: BTreeMap<Vec<i32>, Form> = BTreeMap::new();
        for (elt, c) in self.iter() {
            let Scalar::Fourier(fs) = c else { unreachable!() };
            for (k, v) in &fs.terms {
                let part =
                    parts.entry(k.clone()).or_insert_with(|| Form::zero(self.n, RingKind::Float));
                part.add_to(elt.clone(), &Scalar::Float(*v));
            }
        }
        parts.into_iter().collect()
    }

    /// Largest coefficient modulus bounded by `tol` (exact zero when
    /// `tol == 0`).
    pub fn is_negligible(&self, tol: f64) -> bool {
        if tol == 0.0 {
            self.is_zero()
        } else {
            self.max_abs() <= tol
        }
    }

    /// Applies the algebra morphism sending `e^j` to `images[j-1]` (and
    /// `ebar^j` to its conjugate) multiplicatively. Used for coframe
    /// changes; the images must be 1-forms sharing one ring.
    pub fn substitute(&self, images: &[Form]) -> Result<Self, AlgebraError> {
        assert_eq!(images.len(), self.n as usize);
        let ring = images.first().map(|f| f.ring).unwrap_or(self.ring);
        let mut out = Form::zero(self.n, ring);
        for (elt, c) in self.iter() {
            let mut acc = Form::from_scalar(self.n, c.clone().promote(ring));
            for &j in &elt.i {
                acc = acc.wedge(&images[(j - 1) as usize])?;
            }
            for &j in &elt.j {
                acc = acc.wedge(&images[(j - 1) as usize].conjugate())?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Reassembles a Fourier-ring form from per-frequency float forms.
    pub fn merge_frequencies(n: u8, parts: &[(Vec<i32>, Form)]) -> Form {
        let mut out = Form::zero(n, RingKind::Fourier);
        for (freq, f) in parts {
            for (elt, c) in f.iter() {
                let Scalar::Float(v) = c else { unreachable!() };
                out.add_to(
                    elt.clone(),
                    &Scalar::Fourier(crate::scalar::FourierSum::term(freq.clone(), *v)),
                );
            }
        }
        out
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (elt, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{elt}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
