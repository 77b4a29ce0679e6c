use proptest::prelude::*;

use qdiag_core::hecke::{diag_kernel_of_p, e21, idempotents_r2, p_matrix};
use qdiag_core::pplactic::{preplactic_check, verify_conjecture};
use qdiag_core::qma::{diag_relation_kernel, expand_diagonal, golden_systd, golden_weight21, DEFAULT_MAX_BLOCK};
use qdiag_core::rmat::{
    appendix_blocks, build_rhat, compare_appendix, golden_appendix, pi, rhat_at, satisfies_braid, satisfies_quadratic,
};
use qdiag_core::symgroup::enumerate_perms;
use qdiag_core::{omega, HeckeElt, IdealVariant, Perm, QMatrix, QScalar, Sign};

fn perm_strategy(r: usize) -> impl Strategy<Value = Perm> {
    let perms = enumerate_perms(r).unwrap();
    (0..perms.len()).prop_map(move |i| perms[i].clone())
}

fn element_strategy(r: usize) -> impl Strategy<Value = HeckeElt> {
    prop::collection::vec((perm_strategy(r), -3i64..=3, -2i32..=2), 1..4).prop_map(move |terms| {
        HeckeElt::from_terms(
            r,
            terms.into_iter().map(|(p, c, e)| (p, QScalar::from_int(c) * QScalar::q_pow(e))),
        )
        .unwrap()
    })
}

#[test]
fn multilinear_expansion_matches_golden_data() {
    let golden = golden_systd().unwrap();
    let got = expand_diagonal(3, &[1, 1, 1]).unwrap();
    assert_eq!(got.rows.len(), golden.rows.len());
    assert_eq!(got.cols.len(), golden.cols.len());
    assert_eq!(got.matrix, golden.matrix);
    let kernel = got.matrix.left_kernel();
    assert_eq!(kernel.dim(), 1);
    assert!(kernel.contains(&golden.kernel).unwrap());
}

#[test]
fn two_letter_expansion_matches_golden_data() {
    let golden = golden_weight21().unwrap();
    let got = expand_diagonal(2, &[2, 1]).unwrap();
    assert_eq!(got.rows.len(), golden.rows.len());
    assert_eq!(got.matrix, golden.matrix);
}

#[test]
fn hecke_kernel_agrees_with_the_multilinear_block() {
    // the multilinear block of V^{⊗3} sees exactly the kernel of p on the diagonal
    let hecke = diag_kernel_of_p(3).unwrap();
    let block = expand_diagonal(3, &[1, 1, 1]).unwrap().matrix.left_kernel();
    assert_eq!((hecke.dim(), block.dim()), (1, 1));
    assert_eq!(p_matrix(3).unwrap().rank(), 5);
}

#[test]
fn representation_reproduces_the_reference_blocks() {
    for sign in [Sign::Plus, Sign::Minus] {
        let full = pi(&e21(sign), 3, 3).unwrap();
        assert_eq!(full.mul(&full).unwrap(), full);
        let (six, _) = appendix_blocks(sign).unwrap();
        let (golden_six, _) = golden_appendix(sign).unwrap();
        assert_eq!(six, golden_six);
        assert_eq!(compare_appendix(sign).unwrap().total(), 90);
    }
}

#[test]
fn rhat_is_a_braided_hecke_operator() {
    for n in 2..=3 {
        let r = build_rhat(n).unwrap();
        assert!(satisfies_quadratic(&r));
        assert!(satisfies_braid(&r, n));
    }
    let r = build_rhat(2).unwrap();
    let a = rhat_at(&r, 2, 3, 1).unwrap();
    let b = rhat_at(&r, 2, 3, 2).unwrap();
    let aba = a.mul(&b).unwrap().mul(&a).unwrap();
    let bab = b.mul(&a).unwrap().mul(&b).unwrap();
    assert_eq!(aba, bab);
}

#[test]
fn rank_two_idempotents_split_the_identity() {
    let (plus, minus) = idempotents_r2();
    let sum = plus.add(&minus).unwrap();
    assert_eq!(sum, HeckeElt::one(2));
    assert!(plus.mul(&minus).unwrap().is_zero());
}

#[test]
fn ideal_and_kernel_coincide_in_small_degree() {
    let report = preplactic_check(4, &[IdealVariant::Concat, IdealVariant::ActionClosed]).unwrap();
    assert_eq!(report.dim_kernel, 8);
    assert!(report.all_contained());
    assert!(report.some_equal());
    for (d, r, dim) in [(2, 3, 2), (3, 3, 7), (2, 4, 7), (3, 4, 39)] {
        let c = verify_conjecture(d, r, DEFAULT_MAX_BLOCK).unwrap();
        assert!(c.pass, "d={d} r={r}");
        assert_eq!((c.total_kernel, c.total_ideal), (dim, dim));
    }
}

#[test]
fn relation_kernels_are_left_kernels_of_the_expansions() {
    let kernels = diag_relation_kernel(2, 3, DEFAULT_MAX_BLOCK).unwrap();
    for (weight, k) in kernels {
        let e = expand_diagonal(2, &weight).unwrap();
        // num_words counts the whole free block; the kernel lives on its diagonal words
        assert!(k.num_words >= e.rows.len());
        assert_eq!(k.kernel.ambient(), e.rows.len());
        assert_eq!(k.rank + k.kernel.dim(), e.rows.len());
        for v in k.kernel.rows() {
            assert!(e.matrix.vec_mul(v).unwrap().is_zero());
        }
    }
}

#[test]
fn block_size_bound_is_enforced() {
    assert!(verify_conjecture(3, 4, 10).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pi_is_multiplicative(x in element_strategy(3), y in element_strategy(3)) {
        let lhs = pi(&x.mul(&y).unwrap(), 2, 3).unwrap();
        let rhs = pi(&x, 2, 3).unwrap().mul(&pi(&y, 2, 3).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn generators_satisfy_the_quadratic_relation(i in 1usize..=3, x in element_strategy(4)) {
        let t = HeckeElt::generator(i, 4).unwrap();
        let lhs = x.mul(&t).unwrap().mul(&t).unwrap();
        let rhs = x.axpy(&omega(), &x.mul(&t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_matrices_commute(c in -4i64..=4, e in -2i32..=2, x in element_strategy(3)) {
        let s = QMatrix::scalar(8, &(QScalar::from_int(c) * QScalar::q_pow(e)));
        let m = pi(&x, 2, 3).unwrap();
        prop_assert_eq!(s.mul(&m).unwrap(), m.mul(&s).unwrap());
    }
}
