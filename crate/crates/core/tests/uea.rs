use std::sync::Arc;

use gmc_core::{Complex64, LieAlgebra, UeaElement};
use proptest::prelude::*;

fn heis() -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::heisenberg())
}

fn element(alg: &Arc<LieAlgebra>, words: &[(Vec<usize>, (f64, f64))]) -> UeaElement {
    words.iter().fold(UeaElement::zero(alg), |acc, (w, (re, im))| {
        acc.add(&UeaElement::from_word(alg, w, Complex64::new(*re, *im)).unwrap()).unwrap()
    })
}

fn words(dim: usize) -> impl Strategy<Value = Vec<(Vec<usize>, (f64, f64))>> {
    prop::collection::vec((prop::collection::vec(0..dim, 0..4), (-2.0f64..2.0, -2.0f64..2.0)), 0..4)
}

fn close(a: &UeaElement, b: &UeaElement) -> bool {
    a.sub(b).unwrap().terms().all(|(_, c)| c.norm() < 1e-9)
}

#[test]
fn canonical_commutator() {
    let alg = heis();
    let [p, q, z] = [0, 1, 2].map(|i| UeaElement::generator(&alg, i).unwrap());
    let comm = p.mul(&q).unwrap().sub(&q.mul(&p).unwrap()).unwrap();
    assert_eq!(comm, z);
    assert_eq!(q.mul(&p).unwrap().num_terms(), 2);
}

#[test]
fn abelian_products_commute() {
    let alg = Arc::new(LieAlgebra::abelian(&["A", "B"]));
    let a = UeaElement::generator_by_label(&alg, "A").unwrap();
    let b = UeaElement::generator_by_label(&alg, "B").unwrap();
    assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
}

#[test]
fn algebras_must_match() {
    let a = UeaElement::one(&heis());
    let b = UeaElement::one(&Arc::new(LieAlgebra::torus()));
    assert!(a.mul(&b).is_err());
}

#[test]
fn antipode_without_modular_term_is_transpose() {
    let alg = heis();
    let d = element(&alg, &[(vec![1, 0, 2], (1.0, 0.5)), (vec![0], (2.0, 0.0))]);
    assert_eq!(d.antipode(&[0.0; 3]).unwrap(), d.transpose());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associativity(a in words(3), b in words(3), c in words(3)) {
        let alg = heis();
        let (a, b, c) = (element(&alg, &a), element(&alg, &b), element(&alg, &c));
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(close(&l, &r));
    }

    #[test]
    fn word_order_is_confluent(w in prop::collection::vec(0usize..3, 0..6)) {
        // reducing a word all at once or letter by letter gives the same normal form
        let alg = heis();
        let whole = UeaElement::from_word(&alg, &w, Complex64::new(1.0, 0.0)).unwrap();
        let stepwise = w.iter().fold(UeaElement::one(&alg), |acc, &i| acc.mul(&UeaElement::generator(&alg, i).unwrap()).unwrap());
        prop_assert!(close(&whole, &stepwise));
    }

    #[test]
    fn transpose_is_an_involution(a in words(3)) {
        let a = element(&heis(), &a);
        prop_assert!(close(&a.transpose().transpose(), &a));
    }

    #[test]
    fn transpose_reverses_products(a in words(3), b in words(3)) {
        let alg = heis();
        let (a, b) = (element(&alg, &a), element(&alg, &b));
        let l = a.mul(&b).unwrap().transpose();
        let r = b.transpose().mul(&a.transpose()).unwrap();
        prop_assert!(close(&l, &r));
    }

    #[test]
    fn degree_is_additive(a in words(3), b in words(3)) {
        let alg = heis();
        let (a, b) = (element(&alg, &a), element(&alg, &b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!(a.mul(&b).unwrap().degree(), a.degree() + b.degree());
    }
}
