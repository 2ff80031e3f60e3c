//! Brute-force computations, independent of the library's rules, with their
//! outputs frozen.

use std::collections::BTreeMap;

use coprod::coproduct::check_homomorphism;
use coprod::gallery::{build, qn_right_expansion, Params};
use coprod::index::{Element, Index};
use coprod::scalar::Scalar;

type Unit = (i64, i64);
type Tensor = BTreeMap<(Unit, Unit), i64>;

/// `Δ(e_pq) = Σ_{j≤n} e_pj⊗e_jq`
fn delta(p: i64, q: i64, n: i64) -> Tensor {
    (1..=n).map(|j| (((p, j), (j, q)), 1)).collect()
}

fn unit_mul(a: Unit, b: Unit) -> Option<Unit> {
    (a.1 == b.0).then_some((a.0, b.1))
}

fn tensor_mul(s: &Tensor, t: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for ((a, b), x) in s {
        for ((c, d), y) in t {
            if let (Some(u), Some(v)) = (unit_mul(*a, *c), unit_mul(*b, *d)) {
                *out.entry((u, v)).or_default() += x * y;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

#[test]
fn matrix_coproduct_is_not_multiplicative() {
    let n = 4;
    let lhs = tensor_mul(&delta(1, 1, n), &delta(1, 1, n));
    let rhs = delta(1, 1, n);
    assert_eq!(lhs, Tensor::from([(((1, 1), (1, 1)), 1)]));
    assert_eq!(rhs.len(), 4);
    assert_ne!(lhs, rhs);

    let mut failures = 0;
    for (p, q, r, s) in (1..=3).flat_map(|p| (1..=3).flat_map(move |q| (1..=3).flat_map(move |r| (1..=3).map(move |s| (p, q, r, s))))) {
        let prod = tensor_mul(&delta(p, q, n), &delta(r, s, n));
        let of_prod = unit_mul((p, q), (r, s)).map(|(a, b)| delta(a, b, n)).unwrap_or_default();
        failures += usize::from(prod != of_prod);
    }
    assert_eq!(failures, 81);

    let entry = build("matrix", &Params::default()).unwrap();
    assert!(check_homomorphism(&entry.coproduct, 4).unwrap().fails());
    let t = Element::basis(Index::pair(&Index::IntPair(1, 1), &Index::IntPair(1, 2)));
    assert_eq!(entry.coproduct.act_left(&Index::IntPair(1, 1), &t), t);
}

#[test]
fn qn_right_product_by_hand() {
    // q_1 = e11, q_n = e_n1 + e_nn; (e_rs⊗1)E = Σ_j e_rs q_j ⊗ p_j
    let q = |j: i64| -> Vec<Unit> { if j == 1 { vec![(1, 1)] } else { vec![(j, 1), (j, j)] } };
    let (r, s) = (2, 3);
    let mut by_hand: BTreeMap<(Unit, i64), i64> = BTreeMap::new();
    for j in 1..=8 {
        for u in q(j) {
            if let Some(v) = unit_mul((r, s), u) {
                *by_hand.entry((v, j)).or_default() += 1;
            }
        }
    }
    assert_eq!(by_hand, BTreeMap::from([(((2, 1), 3), 1), (((2, 3), 3), 1)]));
    let lib = qn_right_expansion(r, s);
    let frozen: Element = by_hand
        .iter()
        .map(|(((a, b), j), c)| (Index::pair(&Index::IntPair(*a, *b), &Index::Int(*j)), Scalar::from_int(*c)))
        .collect();
    assert_eq!(lib, frozen);
}
