//! Deterministic randomness for the identity suite.
//!
//! Every trial derives its own stream from `(seed, case, model, metric,
//! trial index)`, so reports are reproducible regardless of execution
//! order or thread count.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis;
use crate::form::Form;
use crate::model::Model;
use crate::scalar::{FourierSum, GaussianRational, RingKind, Scalar};

fn fnv1a(bytes: &[u8], mut hash: u64) -> u64 {
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Stream seeded from the run seed and a stable label, independent of
/// execution order.
pub fn stream(seed: u64, label: &str, trial: u64) -> ChaCha8Rng {
    let mut h = fnv1a(label.as_bytes(), 0xcbf29ce484222325 ^ seed);
    h = fnv1a(&trial.to_le_bytes(), h);
    let mut key = [0u8; 32];
    let mut x = h;
    for chunk in key.chunks_mut(8) {
        // splitmix64 expansion of the folded hash
        x = x.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = x;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform small rational: numerator in `-7..=7`, denominator in `1..=7`.
pub fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-7i64..=7);
    let den = rng.gen_range(1i64..=7);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn small_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::new(small_rational(rng), small_rational(rng))
}

pub fn nonzero_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    loop {
        let g = small_gaussian(rng);
        if !g.is_zero() {
            return g;
        }
    }
}

/// The twist grid: the five fixed values plus three random nonzero
/// Gaussian rationals drawn from the run seed.
pub fn h_grid(seed: u64) -> Vec<GaussianRational> {
    let mut out = alloc::vec![
        GaussianRational::from_int(1),
        GaussianRational::from_int(-1),
        GaussianRational::i(),
        GaussianRational::from_int(2),
        GaussianRational::from_ratio_pair((1, 1), (1, 1)),
    ];
    let mut rng = stream(seed, "h-grid", 0);
    for _ in 0..3 {
        out.push(nonzero_gaussian(&mut rng));
    }
    out
}

fn random_scalar(rng: &mut ChaCha8Rng, model: &Model) -> Scalar {
    match model.ring() {
        RingKind::Rational => Scalar::Rational(small_gaussian(rng)),
        RingKind::Float => {
            Scalar::Float(Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        }
        RingKind::Fourier => {
            let Model::Torus(t) = model else { unreachable!() };
            let mut fs = FourierSum::zero();
            let dims = 2 * t.n as usize;
            // a couple of random frequencies inside the cutoff box
            for _ in 0..2 {
                let freq: Vec<i32> =
                    (0..dims).map(|_| rng.gen_range(-t.cutoff..=t.cutoff)).collect();
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                fs.insert(freq, c);
            }
            Scalar::Fourier(fs)
        }
    }
}

/// Random form with every monomial of the given total degree populated.
pub fn random_form_of_degree(rng: &mut ChaCha8Rng, model: &Model, k: usize) -> Form {
    let mut f = Form::zero(model.n(), model.ring());
    for elt in basis::basis_of_degree(model.n(), k) {
        f.add_to(elt, &random_scalar(rng, model));
    }
    f
}

pub fn random_form_of_bidegree(rng: &mut ChaCha8Rng, model: &Model, p: usize, q: usize) -> Form {
    let mut f = Form::zero(model.n(), model.ring());
    for elt in basis::basis_of_bidegree(model.n(), p, q) {
        f.add_to(elt, &random_scalar(rng, model));
    }
    f
}

/// Random rational-coefficient combination of the given forms.
pub fn random_combination(rng: &mut ChaCha8Rng, n: u8, ring: RingKind, forms: &[Form]) -> Form {
    let mut out = Form::zero(n, ring);
    for f in forms {
        out = out.add(&f.scale_rat(&small_gaussian(rng))).expect("same ring");
    }
    out
}

/// Random real form of the given degree: `v + conj(v)`.
pub fn random_real_form_of_degree(rng: &mut ChaCha8Rng, model: &Model, k: usize) -> Form {
    let v = random_form_of_degree(rng, model, k);
    v.add(&v.conjugate()).expect("same ring")
}

/// A stable label for per-trial seeding.
pub fn trial_label(case: &str, model: &str, metric: &str) -> String {
    alloc::format!("{case}/{model}/{metric}")
}
