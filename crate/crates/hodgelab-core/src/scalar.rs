//! Coefficient rings for form arithmetic.
//!
//! Three rings are supported: exact Gaussian rationals `Q(i)`, complex
//! double-precision floats, and finite Fourier sums (trigonometric
//! polynomials on a real torus) with complex float coefficients.
//! Arithmetic never mixes rings implicitly; promotion from the exact ring
//! into the float rings is explicit.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

#[cfg(feature = "std")]
#[inline]
pub(crate) fn sqrt_f64(x: f64) -> f64 {
    x.sqrt()
}

#[cfg(not(feature = "std"))]
#[inline]
pub(crate) fn sqrt_f64(x: f64) -> f64 {
    libm::sqrt(x)
}

/// An exact element of `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GaussianRational { re: BigRational::one(), im: BigRational::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(v: i64) -> Self {
        GaussianRational { re: BigRational::from_integer(BigInt::from(v)), im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio_pair(re: (i64, i64), im: (i64, i64)) -> Self {
        assert!(re.1 != 0 && im.1 != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    /// `i^k` for any integer exponent, as an exact unit.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus `|z|^2`, a non-negative rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.norm_sq();
        Ok(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussianRational { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussianRational { re: &self.re - &other.re, im: &self.im - &other.im }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl core::ops::Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(&self.re, f)?;
        write!(f, ",")?;
        fmt_rational(&self.im, f)
    }
}

impl fmt::Debug for GaussianRational {
    fmt_debug_as_display!();
}

/// Parses `"p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// Parses `"re,im"` (or just `"re"`) into an exact Gaussian rational.
pub fn parse_gaussian(s: &str) -> Result<GaussianRational, AlgebraError> {
    match s.split_once(',') {
        Some((re, im)) => Ok(GaussianRational::new(parse_rational(re)?, parse_rational(im)?)),
        None => Ok(GaussianRational::new(parse_rational(s)?, BigRational::zero())),
    }
}

/// A finite trigonometric polynomial on the torus `R^{2n}/(2<pi>Z)^{2n}`:
/// a map from integer frequency vectors to complex coefficients.
/// Conjugation negates every frequency and conjugates coefficients.
#[derive(Clone, PartialEq)]
pub struct FourierSum {
    pub terms: BTreeMap<Vec<i32>, Complex64>,
}

impl FourierSum {
    pub fn zero() -> Self {
        FourierSum { terms: BTreeMap::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            terms.insert(Vec::new(), c);
        }
        FourierSum { terms }
    }

    pub fn term(freq: Vec<i32>, c: Complex64) -> Self {
        let mut s = FourierSum::zero();
        s.insert(freq, c);
        s
    }

    fn canonical_freq(mut freq: Vec<i32>) -> Vec<i32> {
        while freq.last() == Some(&0) {
            freq.pop();
        }
        freq
    }

    pub fn insert(&mut self, freq: Vec<i32>, c: Complex64) {
        let freq = Self::canonical_freq(freq);
        let entry = self.terms.entry(freq).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            let key = self.terms.iter().find(|(_, v)| **v == Complex64::new(0.0, 0.0)).map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the zero frequency (the mean value over the torus).
    pub fn constant_term(&self) -> Complex64 {
        self.terms.get(&Vec::new()).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.insert(k.clone(), *v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        FourierSum { terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = FourierSum::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let len = ka.len().max(kb.len());
                let mut k = Vec::with_capacity(len);
                for idx in 0..len {
                    k.push(ka.get(idx).copied().unwrap_or(0) + kb.get(idx).copied().unwrap_or(0));
                }
                out.insert(k, va * vb);
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return FourierSum::zero();
        }
        FourierSum { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn conj(&self) -> Self {
        let mut out = FourierSum::zero();
        for (k, v) in &self.terms {
            out.insert(k.iter().map(|x| -x).collect(), v.conj());
        }
        out
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest infinity-norm of a frequency in the support.
    pub fn max_freq(&self) -> i32 {
        self.terms.keys().flat_map(|k| k.iter().map(|x| x.abs())).max().unwrap_or(0)
    }

    /// Evaluates the sum at the point `theta` in `[0, 2pi)^{2n}`.
    pub fn eval(&self, theta: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.terms {
            let mut phase = 0.0;
            for (idx, kj) in k.iter().enumerate() {
                phase += (*kj as f64) * theta.get(idx).copied().unwrap_or(0.0);
            }
            acc += c * Complex64::new(cos_f64(phase), sin_f64(phase));
        }
        acc
    }
}

#[cfg(feature = "std")]
fn cos_f64(x: f64) -> f64 {
    x.cos()
}
#[cfg(feature = "std")]
fn sin_f64(x: f64) -> f64 {
    x.sin()
}
#[cfg(not(feature = "std"))]
fn cos_f64(x: f64) -> f64 {
    libm::cos(x)
}
#[cfg(not(feature = "std"))]
fn sin_f64(x: f64) -> f64 {
    libm::sin(x)
}

impl fmt::Debug for FourierSum {
    fmt_debug_as_display!();
}

impl fmt::Display for FourierSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (k, v) in &self.terms {
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "[")?;
            for (idx, kj) in k.iter().enumerate() {
                if idx > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{kj}")?;
            }
            write!(f, "]={},{}", v.re, v.im)?;
        }
        write!(f, "}}")
    }
}

/// Which coefficient ring a scalar or form lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RingKind {
    Rational,
    Float,
    Fourier,
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Rational => write!(f, "rational"),
            RingKind::Float => write!(f, "float"),
            RingKind::Fourier => write!(f, "fourier"),
        }
    }
}

/// A scalar in one of the three coefficient rings.
#[derive(Clone, PartialEq)]
pub enum Scalar {
    Rational(GaussianRational),
    Float(Complex64),
    Fourier(FourierSum),
}

impl Scalar {
    pub fn ring(&self) -> RingKind {
        match self {
            Scalar::Rational(_) => RingKind::Rational,
            Scalar::Float(_) => RingKind::Float,
            Scalar::Fourier(_) => RingKind::Fourier,
        }
    }

    pub fn zero(ring: RingKind) -> Self {
        match ring {
            RingKind::Rational => Scalar::Rational(GaussianRational::zero()),
            RingKind::Float => Scalar::Float(Complex64::new(0.0, 0.0)),
            RingKind::Fourier => Scalar::Fourier(FourierSum::zero()),
        }
    }

    pub fn one(ring: RingKind) -> Self {
        match ring {
            RingKind::Rational => Scalar::Rational(GaussianRational::one()),
            RingKind::Float => Scalar::Float(Complex64::new(1.0, 0.0)),
            RingKind::Fourier => Scalar::Fourier(FourierSum::constant(Complex64::new(1.0, 0.0))),
        }
    }

    pub fn from_rat(q: GaussianRational) -> Self {
        Scalar::Rational(q)
    }

    pub fn from_int(ring: RingKind, v: i64) -> Self {
        Scalar::from_rat(GaussianRational::from_int(v)).promote(ring)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Float(c) => *c == Complex64::new(0.0, 0.0),
            Scalar::Fourier(s) => s.is_zero(),
        }
    }

    /// Explicit promotion along `Rational -> Float -> Fourier`.
    /// Demotion is not provided; asking for it is a programming error.
    pub fn promote(self, ring: RingKind) -> Self {
        match (self, ring) {
            (s @ Scalar::Rational(_), RingKind::Rational) => s,
            (s @ Scalar::Float(_), RingKind::Float) => s,
            (s @ Scalar::Fourier(_), RingKind::Fourier) => s,
            (Scalar::Rational(q), RingKind::Float) => Scalar::Float(q.to_complex()),
            (Scalar::Rational(q), RingKind::Fourier) => {
                Scalar::Fourier(FourierSum::constant(q.to_complex()))
            }
            (Scalar::Float(c), RingKind::Fourier) => Scalar::Fourier(FourierSum::constant(c)),
            (s, r) => panic!("cannot demote {:?} to {r:?}", s.ring()),
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.ring() != other.ring() {
            Err(AlgebraError::RingMismatch { left: self.ring(), right: other.ring() })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.add(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            (Scalar::Fourier(a), Scalar::Fourier(b)) => Scalar::Fourier(a.add(b)),
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.clone().neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.mul(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            (Scalar::Fourier(a), Scalar::Fourier(b)) => Scalar::Fourier(a.mul(b)),
            _ => unreachable!(),
        })
    }

    pub fn neg(self) -> Self {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Float(a) => Scalar::Float(-a),
            Scalar::Fourier(a) => Scalar::Fourier(a.neg()),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a.conj()),
            Scalar::Float(a) => Scalar::Float(a.conj()),
            Scalar::Fourier(a) => Scalar::Fourier(a.conj()),
        }
    }

    /// Multiplicative inverse; defined for the field rings only.
    pub fn inv(&self) -> Result<Self, AlgebraError> {
        match self {
            Scalar::Rational(a) => Ok(Scalar::Rational(a.inv()?)),
            Scalar::Float(a) => {
                if *a == Complex64::new(0.0, 0.0) {
                    Err(AlgebraError::DivisionByZero)
                } else {
                    Ok(Scalar::Float(a.inv()))
                }
            }
            Scalar::Fourier(_) => Err(AlgebraError::NotInvertibleRing),
        }
    }

    /// Exact scaling by a Gaussian rational, staying in the scalar's ring.
    pub fn mul_rat(&self, q: &GaussianRational) -> Self {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a.mul(q)),
            Scalar::Float(a) => Scalar::Float(a * q.to_complex()),
            Scalar::Fourier(a) => Scalar::Fourier(a.scale(q.to_complex())),
        }
    }

    /// Largest coefficient modulus, for residual reporting.
    pub fn max_abs(&self) -> f64 {
        match self {
            Scalar::Rational(a) => a.abs_f64(),
            Scalar::Float(a) => a.norm(),
            Scalar::Fourier(a) => a.max_abs(),
        }
    }

    pub fn as_rational(&self) -> Option<&GaussianRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Real part as an exact rational; `None` off the exact ring.
    pub fn real_rational(&self) -> Option<BigRational> {
        self.as_rational().map(|q| q.re.clone())
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Rational(q) => q.to_complex(),
            Scalar::Float(c) => *c,
            Scalar::Fourier(s) => s.constant_term(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Float(c) => write!(f, "{},{}", c.re, c.im),
            Scalar::Fourier(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fmt_debug_as_display!();
}

/// Fixed pool of small rationals used by randomized trial generators:
/// numerators in `-7..=7`, denominators in `1..=7`, reduced.
pub fn small_rational_pool() -> Vec<BigRational> {
    let mut pool = Vec::new();
    for num in -7i64..=7 {
        for den in 1i64..=7 {
            let r = BigRational::new(BigInt::from(num), BigInt::from(den));
            if !pool.contains(&r) {
                pool.push(r);
            }
        }
    }
    pool.sort();
    pool
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_field_ops() {
        // (1+i)(1-i) = 2
        let a = GaussianRational::from_ratio_pair((1, 1), (1, 1));
        let b = a.conj();
        let p = a.mul(&b);
        assert_eq!(p, GaussianRational::from_int(2));
        // conj is an involution
        let c = GaussianRational::from_ratio_pair((3, 7), (2, 5));
        assert_eq!(c.conj().conj(), c);
        // field inverse
        let inv = c.inv().unwrap();
        assert_eq!(c.mul(&inv), GaussianRational::one());
    }

    #[test]
    fn division_by_zero_rejected() {
        assert!(matches!(GaussianRational::zero().inv(), Err(AlgebraError::DivisionByZero)));
    }

    #[test]
    fn ring_mismatch_rejected() {
        let a = Scalar::Rational(GaussianRational::one());
        let b = Scalar::Float(Complex64::new(1.0, 0.0));
        assert!(matches!(a.add(&b), Err(AlgebraError::RingMismatch { .. })));
    }

    #[test]
    fn fourier_product_adds_frequencies() {
        let a = FourierSum::term(alloc::vec![1, 0], Complex64::new(2.0, 0.0));
        let b = FourierSum::term(alloc::vec![3, -1], Complex64::new(0.0, 1.0));
        let p = a.mul(&b);
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms.get(&alloc::vec![4, -1]).copied(), Some(Complex64::new(0.0, 2.0)));
    }

    #[test]
    fn fourier_conj_negates_frequencies() {
        let a = FourierSum::term(alloc::vec![1, -2], Complex64::new(2.0, 3.0));
        let c = a.conj();
        assert_eq!(c.terms.get(&alloc::vec![-1, 2]).copied(), Some(Complex64::new(2.0, -3.0)));
        assert_eq!(c.conj(), a);
    }

    #[test]
    fn i_pow_cycle() {
        assert_eq!(GaussianRational::i_pow(9), GaussianRational::i());
        assert_eq!(GaussianRational::i_pow(-1), -GaussianRational::i());
        let m4 = GaussianRational::i_pow(4);
        assert_eq!(m4, GaussianRational::one());
    }

    #[test]
    fn parse_round_trip() {
        let g = parse_gaussian("3/7,-2/5").unwrap();
        assert_eq!(alloc::format!("{g}"), "3/7,-2/5");
        let h = parse_gaussian("-4").unwrap();
        assert_eq!(alloc::format!("{h}"), "-4,0");
    }
}
