//! Property tests for the exact linear algebra, group presentations and norm forms.
//!
//! The file name sorts ahead of `acceptance` on purpose: cargo stops running a
//! package's remaining test binaries once one of them exits nonzero.

use std::path::PathBuf;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use nrc_core::field::{Elem, NumberField};
use nrc_core::group::FinAbGroup;
use nrc_core::input::load_field;
use nrc_core::linalg::{hnf_basis, hnf_full, is_hnf, snf_full, IntMat};
use nrc_core::normform::{expand_norm_form, NormForm};

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMat> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r).prop_map(|rows| {
            IntMat::from_rows(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()).unwrap()
        })
    })
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn example2() -> &'static (NumberField, NormForm) {
    static CELL: OnceLock<(NumberField, NormForm)> = OnceLock::new();
    CELL.get_or_init(|| {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fields/example2.toml");
        let k = load_field(&path).unwrap().field;
        // Z[alpha] inside the maximal order
        let theta = k.theta();
        let basis: Vec<Elem> = (0..4).map(|i| k.pow_u(&theta, i)).collect();
        let nf = expand_norm_form(&k, &basis).unwrap();
        (k, nf)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hnf_is_unimodular_transform(m in matrix(6, 50)) {
        let h = hnf_full(&m);
        prop_assert_eq!(&m * &h.u, h.h.clone());
        prop_assert!(h.u.is_unimodular());
        prop_assert!(is_hnf(&h.h));
    }

    #[test]
    fn hnf_basis_is_canonical_under_column_ops(m in matrix(5, 30), a in 0usize..5, b in 0usize..5, f in -7i64..=7) {
        let mut n = m.clone();
        let (a, b) = (a % m.cols(), b % m.cols());
        if a != b {
            n.add_col_multiple(a, b, &BigInt::from(f));
        }
        n.negate_col(b);
        prop_assert_eq!(hnf_basis(&m), hnf_basis(&n));
    }

    #[test]
    fn snf_diagonalises_with_divisibility(m in matrix(6, 50)) {
        let s = snf_full(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(s.d.is_diagonal());
        let d = s.diagonal();
        for w in d.windows(2) {
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
                prop_assert!(!w[0].is_negative());
            }
        }
    }

    #[test]
    fn group_order_is_relation_determinant(m in matrix(4, 12)) {
        prop_assume!(m.is_square() && !m.det().is_zero());
        let g = FinAbGroup::from_relations(&m).unwrap();
        prop_assert_eq!(g.order(), m.det().abs());
        let inv = g.invariants();
        for w in inv.windows(2) {
            prop_assert!(w[0].is_multiple_of(&w[1]));
        }
        // each raw relation column dies in the group
        for j in 0..m.cols() {
            prop_assert!(g.is_zero(&g.from_raw(&m.col(j))));
        }
    }

    #[test]
    fn group_arithmetic_is_consistent(orders in prop::collection::vec(2i64..=12, 1..=3), a in prop::collection::vec(-40i64..=40, 3), b in prop::collection::vec(-40i64..=40, 3)) {
        let g = FinAbGroup::cyclic_product(&orders).unwrap();
        let k = g.raw_rank();
        let (ra, rb) = (g.from_raw(&ints(&a[..k])), g.from_raw(&ints(&b[..k])));
        let sum = g.add(&ra, &rb);
        prop_assert_eq!(g.add(&rb, &ra), sum.clone());
        prop_assert_eq!(g.from_raw(&ints(&a[..k].iter().zip(&b[..k]).map(|(x, y)| x + y).collect::<Vec<_>>())), sum);
        let o = g.elem_order(&ra);
        prop_assert!(g.is_zero(&g.scale(&ra, &o)));
        prop_assert!(g.order().is_multiple_of(&o));
    }

    #[test]
    fn quotient_order_matches_index(orders in prop::collection::vec(2i64..=10, 1..=3), h in prop::collection::vec(-20i64..=20, 3)) {
        let g = FinAbGroup::cyclic_product(&orders).unwrap();
        let hv = g.reduce(&g.from_raw(&ints(&h[..g.raw_rank()])));
        let hv: Vec<BigInt> = hv.into_iter().take(g.ngens()).collect();
        prop_assume!(g.ngens() > 0);
        let m = g.subgroup_matrix(&[hv.clone()]).unwrap();
        let q = g.quotient(&m).unwrap();
        prop_assert_eq!(q.order() * g.elem_order(&hv), g.order());
        prop_assert_eq!(g.index(&m), q.order());
    }

    #[test]
    fn norm_form_matches_field_norm(x in prop::collection::vec(-6i64..=6, 4)) {
        let (k, nf) = example2();
        let v = ints(&x);
        let n = k.norm(&nf.element(&v));
        prop_assert!(n.is_integer());
        prop_assert_eq!(nf.eval(&v), n.to_integer());
    }

    #[test]
    fn norm_form_is_homogeneous(x in prop::collection::vec(-5i64..=5, 4), t in -4i64..=4) {
        let (_, nf) = example2();
        let scaled: Vec<i64> = x.iter().map(|c| c * t).collect();
        prop_assert_eq!(nf.eval_i64(&scaled), nf.eval_i64(&x) * BigInt::from(t).pow(4));
    }

    #[test]
    fn norm_form_is_multiplicative(x in prop::collection::vec(-4i64..=4, 4), y in prop::collection::vec(-4i64..=4, 4)) {
        let (k, nf) = example2();
        let prod = k.mul(&nf.element(&ints(&x)), &nf.element(&ints(&y)));
        let c = nf.coords_of(&prod).expect("Z[alpha] is a ring");
        prop_assert_eq!(nf.eval(&c), nf.eval_i64(&x) * nf.eval_i64(&y));
    }
}
