//! Independent oracles for the core algebra: brute-force wedge expansion,
//! Stokes on random top-minus-one forms, the quasi-isometry constants
//! cross-derived from two routes, and the finite-difference derivative
//! check on the Fourier torus.

use hodgelab_core::basis::{basis_of_degree, BasisElement};
use hodgelab_core::catalog;
use hodgelab_core::form::Form;
use hodgelab_core::identity::quasi_isometry_constant;
use hodgelab_core::metric::Metric;
use hodgelab_core::model::Model;
use hodgelab_core::rng;
use hodgelab_core::scalar::{FourierSum, GaussianRational, RingKind, Scalar};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

/// Brute-force wedge of monomials: concatenate index lists tagged by
/// block (holomorphic first), sort by bubble passes counting swaps, and
/// reject repetitions. Independent of the merge-based production code.
fn oracle_wedge_monomials(a: &BasisElement, b: &BasisElement) -> Option<(BasisElement, i64)> {
    // encode: holomorphic index j as 2j, anti-holomorphic as 2j+1, so the
    // canonical order (all holomorphic ascending, then anti ascending)
    // is encoded by: holomorphic block before anti block
    let encode = |e: &BasisElement| -> Vec<i64> {
        let mut v: Vec<i64> = e.i.iter().map(|&x| x as i64).collect();
        v.extend(e.j.iter().map(|&x| 1000 + x as i64));
        v
    };
    let mut seq = encode(a);
    seq.extend(encode(b));
    // bubble sort with swap counting
    let mut swaps = 0i64;
    let mut arr = seq;
    let len = arr.len();
    for i in 0..len {
        for jj in 0..len.saturating_sub(i + 1) {
            if arr[jj] > arr[jj + 1] {
                arr.swap(jj, jj + 1);
                swaps += 1;
            }
        }
    }
    for w in arr.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    let i: Vec<u8> = arr.iter().filter(|&&v| v < 1000).map(|&v| v as u8).collect();
    let j: Vec<u8> = arr.iter().filter(|&&v| v >= 1000).map(|&v| (v - 1000) as u8).collect();
    let sign = if swaps % 2 == 0 { 1 } else { -1 };
    Some((BasisElement::new(i, j), sign))
}

fn oracle_wedge(a: &Form, b: &Form) -> Form {
    let mut out = Form::zero(a.n, a.ring);
    for (ea, ca) in a.iter() {
        for (eb, cb) in b.iter() {
            if let Some((elt, sign)) = oracle_wedge_monomials(ea, eb) {
                let mut c = ca.mul(cb).unwrap();
                if sign < 0 {
                    c = c.neg();
                }
                out.add_to(elt, &c);
            }
        }
    }
    out
}

#[test]
fn wedge_matches_brute_force_oracle_and_is_associative() {
    let model = catalog::torus(3);
    for trial in 0..200u64 {
        let mut rng = rng::stream(11, "wedge-oracle", trial);
        let du = (trial % 3) as usize + 1;
        let dv = (trial % 2) as usize + 1;
        let dw = (trial % 2) as usize;
        let u = rng::random_form_of_degree(&mut rng, &model, du);
        let v = rng::random_form_of_degree(&mut rng, &model, dv);
        let w = rng::random_form_of_degree(&mut rng, &model, dw);
        let uv = u.wedge(&v).unwrap();
        assert_eq!(uv, oracle_wedge(&u, &v), "wedge disagrees with the oracle");
        // associativity, exact
        let lhs = uv.wedge(&w).unwrap();
        let rhs = u.wedge(&v.wedge(&w).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "associativity fails on trial {trial}");
    }
}

#[test]
fn stokes_holds_on_100_random_forms() {
    let model = catalog::iwasawa();
    for trial in 0..100u64 {
        let mut rng = rng::stream(5, "stokes", trial);
        let eta = rng::random_form_of_degree(&mut rng, &model, 5);
        let deta = model.d(&eta).unwrap();
        if deta.is_zero() {
            continue;
        }
        let v = model.integrate(&deta).unwrap();
        assert!(v.is_zero(), "Stokes residual on trial {trial}");
    }
}

#[test]
fn integrate_is_conjugation_equivariant() {
    let model = catalog::sl2c();
    for trial in 0..20u64 {
        let mut rng = rng::stream(6, "conj-integrate", trial);
        let u = rng::random_form_of_degree(&mut rng, &model, 6);
        let a = model.integrate(&u.conjugate()).unwrap();
        let b = model.integrate(&u).unwrap().conj();
        assert_eq!(a, b);
    }
}

/// The quasi-isometry constants are reproduced from the independent route:
/// the ratio of the squared-norm scalings of the two omega-power maps.
#[test]
fn quasi_isometry_constants_cross_check_n_up_to_4() {
    let fact = |k: usize| -> BigRational {
        let mut out = BigRational::from_integer(BigInt::from(1));
        for v in 2..=k {
            out *= BigRational::from_integer(BigInt::from(v as i64));
        }
        out
    };
    let binom = |n: usize, k: usize| -> BigRational {
        if k > n {
            return BigRational::from_integer(BigInt::from(0));
        }
        fact(n) / (fact(k) * fact(n - k))
    };
    for n in 2..=4usize {
        for k in 0..=n {
            let l = k / 2;
            for r in 0..=(n - k) {
                for s in 0..=l {
                    // route 1: closed form
                    let direct = quasi_isometry_constant(n, k, r, s);
                    // route 2: ratio of the primitive-block scalings of the
                    // squared norms with and without the extra omega^r
                    let with_r = fact(r + s) * fact(r + s) * binom(n - k + 2 * s, r + s);
                    let without = fact(s) * fact(s) * binom(n - k + 2 * s, s);
                    assert_eq!(direct, with_r / without, "constant mismatch at ({n},{k},{r},{s})");
                }
            }
        }
    }
    // the two pinned examples
    assert_eq!(quasi_isometry_constant(3, 1, 2, 0), BigRational::from_integer(BigInt::from(4)));
    assert_eq!(quasi_isometry_constant(3, 2, 1, 0), BigRational::from_integer(BigInt::from(1)));
    assert_eq!(quasi_isometry_constant(3, 2, 1, 1), BigRational::from_integer(BigInt::from(4)));
}

#[test]
fn lefschetz_norm_scaling_observed_on_forms_matches_constants() {
    // |omega^r /\ phi|^2 = (r!)^2 C(n-k,r) |phi|^2 for primitive phi,
    // measured on actual forms for every diagonal metric in the default set
    let n = 3u8;
    let model = catalog::torus(n);
    for metric in catalog::default_metrics(n) {
        for trial in 0..10u64 {
            let mut rng = rng::stream(9, "lefschetz-norm", trial);
            let k = (trial % 3) as usize + 1;
            let raw = rng::random_form_of_degree(&mut rng, &model, k);
            let comps = hodgelab_core::lefschetz::lefschetz_decompose(&metric, &raw).unwrap();
            let phi = &comps[0];
            for r in 0..=(n as usize - k) {
                let powered = hodgelab_core::lefschetz::lefschetz_l(&metric, phi, r).unwrap();
                let lhs = metric.inner(&powered, &powered).unwrap();
                let c = quasi_isometry_constant(n as usize, k, r, 0);
                let rhs = metric
                    .inner(phi, phi)
                    .unwrap()
                    .mul_rat(&GaussianRational::new(c, BigRational::from_integer(BigInt::from(0))));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn torus_delbar_matches_finite_differences_to_1e6() {
    let Model::Torus(t) = catalog::fourier_torus2() else { panic!() };
    // a handful of specific characters plus a random mix
    let mut f = FourierSum::zero();
    f.insert(vec![1, 0, 2, 0], Complex64::new(0.7, -0.3));
    f.insert(vec![0, -2, 1, 1], Complex64::new(-0.2, 0.9));
    f.insert(vec![2, 1, -1, -2], Complex64::new(0.4, 0.1));
    let form = Form::from_scalar(2, Scalar::Fourier(f));
    let residual = t.delbar_fd_residual(&form, 32, 0.02).unwrap();
    assert!(residual < 1e-6, "finite-difference residual {residual}");
}

#[test]
fn three_space_decomposition_reassembles_identity() {
    // ker Lap + im d + im d* spans every degree with mutual orthogonality
    let model = catalog::iwasawa();
    let metric = Metric::diagonal("d", 3, &[(1, 1), (2, 1), (1, 3)]).unwrap();
    let ops = hodgelab_core::operators::Ops::new(&model, &metric).unwrap();
    for k in 0..=6usize {
        let dom = basis_of_degree(3, k);
        let mut total = 0usize;
        let harm = ops
            .harmonic_basis(
                &hodgelab_core::operators::HarmonicKind::D,
                hodgelab_core::operators::DegreeSpec::Degree(k),
            )
            .unwrap();
        total += harm.len();
        // dim im d into degree k and im d* into degree k by rank
        if k >= 1 {
            let src = basis_of_degree(3, k - 1);
            let mut cols = Vec::new();
            for elt in &src {
                let e = Form::monomial(3, elt.clone(), Scalar::one(RingKind::Rational));
                cols.push(hodgelab_core::linalg::form_to_vector(&dom, &model.d(&e).unwrap()));
            }
            total += hodgelab_core::linalg::Matrix::from_columns(dom.len(), RingKind::Rational, &cols)
                .rank();
        }
        if k + 1 <= 6 {
            let src = basis_of_degree(3, k + 1);
            let mut cols = Vec::new();
            for elt in &src {
                let e = Form::monomial(3, elt.clone(), Scalar::one(RingKind::Rational));
                cols.push(hodgelab_core::linalg::form_to_vector(&dom, &ops.d_star(&e).unwrap()));
            }
            total += hodgelab_core::linalg::Matrix::from_columns(dom.len(), RingKind::Rational, &cols)
                .rank();
        }
        assert_eq!(total, dom.len(), "three-space decomposition fails in degree {k}");
    }
}

#[test]
fn bc_aeppli_pairing_is_perfect_on_catalog_models() {
    use hodgelab_core::cohomology::{compute_space, pairing, Flavor};
    for model in catalog::all_lie_models() {
        let n = model.n() as usize;
        let bc = compute_space(&model, Flavor::BottChern(1, 1)).unwrap();
        let ae = compute_space(&model, Flavor::Aeppli(n - 1, n - 1)).unwrap();
        assert_eq!(bc.dim(), ae.dim(), "pairing spaces differ on {}", model.name());
        if bc.dim() == 0 {
            continue;
        }
        let mut gram = hodgelab_core::linalg::Matrix::zero(bc.dim(), ae.dim(), RingKind::Rational);
        for (r, u) in bc.reps.iter().enumerate() {
            for (c, v) in ae.reps.iter().enumerate() {
                gram.set(r, c, pairing(&model, u, v).unwrap());
            }
        }
        assert_eq!(gram.rank(), bc.dim(), "degenerate pairing on {}", model.name());
    }
}

#[test]
fn adjointness_of_l_and_lambda_on_all_basis_pairs() {
    let n = 3u8;
    let metric = Metric::diagonal("d", n, &[(2, 1), (1, 2), (5, 3)]).unwrap();
    let omega = metric.omega(RingKind::Rational);
    for k in 0..=5usize {
        for a in basis_of_degree(n, k) {
            for b in basis_of_degree(n, k + 2) {
                let u = Form::monomial(n, a.clone(), Scalar::one(RingKind::Rational));
                let v = Form::monomial(n, b.clone(), Scalar::one(RingKind::Rational));
                let lhs = metric.inner(&omega.wedge(&u).unwrap(), &v).unwrap();
                let rhs = metric
                    .inner(&u, &hodgelab_core::lefschetz::lambda(&metric, &v).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "adjointness fails on {a} vs {b}");
            }
        }
    }
}
