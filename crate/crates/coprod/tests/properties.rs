use std::sync::Arc;

use coprod::algebra::{AlgebraRef, Functional, MatrixUnits, Pattern};
use coprod::coproduct::{slice_with, Map, OneSided};
use coprod::dual::{Convention, DualElement, Duals, Side, Space};
use coprod::gallery::{build, GalleryEntry, Params};
use coprod::index::{Element, Index};
use coprod::scalar::Scalar;
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=5, -3i64..=3).prop_map(|(n, d, im)| {
        let re = Scalar::from_ratio(n, d);
        &re + &(&Scalar::i() * &Scalar::from_int(im))
    })
}

fn unit() -> impl Strategy<Value = Index> {
    (1i64..=5, 1i64..=5).prop_map(|(p, q)| Index::IntPair(p, q))
}

fn element() -> impl Strategy<Value = Element> {
    prop::collection::vec((unit(), scalar()), 0..5).prop_map(Element::from_terms)
}

fn coords() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((1i64..=4, 1i64..=4, -3i64..=3), 1..4)
}

fn matrix() -> GalleryEntry {
    build("matrix", &Params::default()).unwrap()
}

fn table(alg: &AlgebraRef, entries: &[(i64, i64, i64)]) -> DualElement {
    let values = Element::from_terms(entries.iter().map(|(p, q, c)| (Index::IntPair(*p, *q), Scalar::from_int(*c))));
    let a = alg.clone();
    DualElement::new(Functional::table("ω", values, move |i| a.size(i)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_coefficients_are_never_stored(x in element(), y in element()) {
        let d = x.sub(&x);
        prop_assert!(d.is_zero());
        prop_assert!(x.add(&y).terms().all(|(_, c)| !c.is_zero()));
        prop_assert_eq!(x.add(&y).sub(&y), x.canonicalize());
    }

    #[test]
    fn tensor_is_bilinear(x in element(), y in element(), z in element(), c in scalar()) {
        let lhs = Element::tensor(&x.add(&y.scale(&c)), &z);
        let rhs = Element::tensor(&x, &z).add(&Element::tensor(&y, &z).scale(&c));
        prop_assert_eq!(lhs, rhs);
        let lhs = Element::tensor(&z, &x.add(&y));
        prop_assert_eq!(lhs, Element::tensor(&z, &x).add(&Element::tensor(&z, &y)));
    }

    #[test]
    fn matrix_product_is_associative(x in element(), y in element(), z in element()) {
        let c = MatrixUnits::infinite(Pattern::Full);
        let m = |a: &Element, b: &Element| coprod::algebra::mul(&c, a, b);
        prop_assert_eq!(m(&m(&x, &y), &z), m(&x, &m(&y, &z)));
    }

    #[test]
    fn matrix_t3_t4_closed_forms(p in 1i64..=5, q in 1i64..=5, r in 1i64..=5, s in 1i64..=5) {
        let cp = matrix().coproduct;
        let (a, b) = (Index::IntPair(p, q), Index::IntPair(r, s));
        // (1⊗e_rs)Δ(e_pq) = e_ps⊗e_rq, Δ(e_pq)(e_rs⊗1) = e_ps⊗e_rq
        let want = OneSided::Finite(Element::basis(Index::pair(&Index::IntPair(p, s), &Index::IntPair(r, q))));
        prop_assert_eq!(cp.t(Map::T3, &a, &b, 6), want.clone());
        prop_assert_eq!(cp.t(Map::T4, &b, &a, 6), want);
    }

    #[test]
    fn integer_t_maps_shift(a in -8i64..=8, b in -8i64..=8) {
        let cp = build("group:Z", &Params::default()).unwrap().coproduct;
        let (x, y) = (Index::Int(a), Index::Int(b));
        let t1 = OneSided::Finite(Element::basis(Index::pair(&Index::Int(a - b), &y)));
        let t2 = OneSided::Finite(Element::basis(Index::pair(&x, &Index::Int(b - a))));
        prop_assert_eq!(cp.t(Map::T1, &x, &y, 6), t1);
        prop_assert_eq!(cp.t(Map::T2, &x, &y, 6), t2);
    }

    #[test]
    fn counit_absorbs_left_slices(w in coords(), p in 1i64..=5, q in 1i64..=5) {
        let entry = matrix();
        let d = Duals::new(&entry.coproduct, 4).unwrap();
        let eps = &entry.counit.as_ref().unwrap().0;
        let w = table(&d.algebra(), &w);
        let a = Index::IntPair(p, q);
        let slice = d.slice(Side::Left, &w, &a).unwrap();
        let OneSided::Finite(s) = slice else { panic!("matrix slices are finite") };
        prop_assert_eq!(eps.eval(&s), w.at(&a));
    }

    #[test]
    fn matrix_dual_product_is_matrix_multiplication(w1 in coords(), w2 in coords(), p in 1i64..=5, q in 1i64..=5) {
        let d = Duals::new(&matrix().coproduct, 4).unwrap();
        let alg = d.algebra();
        let (x, y) = (table(&alg, &w1), table(&alg, &w2));
        let want = (1..=5).fold(Scalar::zero(), |acc, j| {
            &acc + &(&x.at(&Index::IntPair(p, j)) * &y.at(&Index::IntPair(j, q)))
        });
        for conv in [Convention::Left, Convention::Right] {
            let xy = d.product(&x, &y, conv).unwrap();
            prop_assert_eq!(xy.at(&Index::IntPair(p, q)), want.clone());
            prop_assert!(d.membership(&xy, Space::B0).holds());
        }
    }

    #[test]
    fn reduced_functionals_have_finite_opposite_slices(r in 1i64..=4, s in 1i64..=4, c in 1i64..=3) {
        let d = Duals::new(&matrix().coproduct, 4).unwrap();
        let alg = d.algebra();
        let f = Functional::coordinate(&*alg, &Index::IntPair(r, s));
        let cu = Element::basis(Index::IntPair(c, r));
        let left = DualElement::reduced(&alg, Side::Left, vec![(f.clone(), cu.clone())]);
        let right = DualElement::reduced(&alg, Side::Right, vec![(f, cu)]);
        prop_assert!(d.membership(&left, Space::B0l).holds());
        prop_assert!(d.membership(&left, Space::Br).holds());
        prop_assert!(d.membership(&right, Space::B0r).holds());
        prop_assert!(d.membership(&right, Space::Bl).holds());
    }
}

#[test]
fn slicing_a_tensor_with_the_counit() {
    let alg: AlgebraRef = Arc::new(MatrixUnits::infinite(Pattern::Full));
    let eps = matrix().counit.unwrap().0;
    let t = Element::tensor(&Element::basis(Index::IntPair(2, 2)), &Element::basis(Index::IntPair(1, 3)));
    assert_eq!(slice_with(&t, &eps, true), Element::basis(Index::IntPair(1, 3)));
    assert!(slice_with(&t, &eps, false).is_zero());
    assert_eq!(alg.label(&Index::IntPair(1, 3)), "e13");
}
