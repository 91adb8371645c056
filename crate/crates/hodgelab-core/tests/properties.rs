//! Property tests over random small-rational forms.

use hodgelab_core::basis::{basis_of_degree, BasisElement};
use hodgelab_core::form::Form;
use hodgelab_core::metric::Metric;
use hodgelab_core::scalar::{GaussianRational, RingKind, Scalar};
use hodgelab_core::star::hodge_star;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = GaussianRational> {
    ((-7i64..=7), (1i64..=7), (-7i64..=7), (1i64..=7))
        .prop_map(|(a, b, c, d)| GaussianRational::from_ratio_pair((a, b), (c, d)))
}

fn form_of_degree(n: u8, k: usize) -> impl Strategy<Value = Form> {
    let elts = basis_of_degree(n, k);
    proptest::collection::vec(small_rat(), elts.len()).prop_map(move |coeffs| {
        let mut f = Form::zero(n, RingKind::Rational);
        for (elt, c) in elts.iter().zip(coeffs) {
            f.add_to(elt.clone(), &Scalar::Rational(c));
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graded_commutativity(
        du in 0usize..=3,
        dv in 0usize..=3,
        seed_u in 0u64..1000,
        seed_v in 0u64..1000,
    ) {
        let n = 3u8;
        let mut rng_u = hodgelab_core::rng::stream(seed_u, "prop-u", 0);
        let mut rng_v = hodgelab_core::rng::stream(seed_v, "prop-v", 0);
        let model = hodgelab_core::catalog::torus(n);
        let u = hodgelab_core::rng::random_form_of_degree(&mut rng_u, &model, du);
        let v = hodgelab_core::rng::random_form_of_degree(&mut rng_v, &model, dv);
        let uv = u.wedge(&v).unwrap();
        let mut vu = v.wedge(&u).unwrap();
        if (du * dv) % 2 == 1 {
            vu = vu.neg();
        }
        prop_assert_eq!(uv, vu);
    }

    #[test]
    fn odd_forms_square_to_zero(u in form_of_degree(3, 1), w in form_of_degree(3, 3)) {
        prop_assert!(u.wedge(&u).unwrap().is_zero());
        prop_assert!(w.wedge(&w).unwrap().is_zero());
    }

    #[test]
    fn conjugation_is_an_involution_and_degree_swaps(u in form_of_degree(3, 2)) {
        prop_assert_eq!(u.conjugate().conjugate(), u.clone());
        // components swap
        let c20 = u.component(2, 0);
        prop_assert_eq!(c20.conjugate(), u.conjugate().component(0, 2));
    }

    #[test]
    fn components_partition_the_form(u in form_of_degree(3, 2)) {
        let mut back = Form::zero(3, RingKind::Rational);
        for p in 0..=2usize {
            back = back.add(&u.component(p, 2 - p)).unwrap();
        }
        prop_assert_eq!(back, u);
    }

    #[test]
    fn serialization_round_trip_is_byte_identical(u in form_of_degree(3, 2)) {
        let text = u.serialize();
        let parsed = Form::parse(3, &text).unwrap();
        prop_assert_eq!(parsed.serialize(), text);
        prop_assert_eq!(parsed, u);
    }

    #[test]
    fn star_square_sign_on_random_forms(u in form_of_degree(3, 2), v in form_of_degree(3, 3)) {
        let metric = Metric::diagonal("d", 3, &[(2, 1), (1, 3), (5, 7)]).unwrap();
        let ss_even = hodge_star(&metric, &hodge_star(&metric, &u).unwrap()).unwrap();
        prop_assert_eq!(ss_even, u);
        let ss_odd = hodge_star(&metric, &hodge_star(&metric, &v).unwrap()).unwrap();
        prop_assert_eq!(ss_odd, v.neg());
    }

    #[test]
    fn ring_ops_field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
        // distributivity and associativity, exactly
        let ab_c = a.mul(&b.add(&c));
        let ab_ac = a.mul(&b).add(&a.mul(&c));
        prop_assert_eq!(ab_c, ab_ac);
        let assoc_l = a.mul(&b).mul(&c);
        let assoc_r = a.mul(&b.mul(&c));
        prop_assert_eq!(assoc_l, assoc_r);
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), GaussianRational::one());
        }
    }
}

#[test]
fn canonical_order_is_total_and_stable() {
    let all = hodgelab_core::basis::full_basis(3);
    for w in all.windows(2) {
        assert!(w[0] < w[1]);
    }
    // scalar element sorts first, top element last
    assert_eq!(all[0], BasisElement::scalar());
    assert_eq!(*all.last().unwrap(), BasisElement::top(3));
}
