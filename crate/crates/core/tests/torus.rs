use std::f64::consts::PI;
use std::sync::Arc;

use gmc_core::gmc::{covariance_residuals, GmcFunctional, GmcModel};
use gmc_core::torus::*;
use gmc_core::{Complex64, Error, GrowthClass, GrowthEnvelope, LieAlgebra, UeaElement};
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn torus_alg() -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::torus())
}

fn poly_element(coeffs: &[(f64, f64)]) -> UeaElement {
    let alg = torus_alg();
    coeffs.iter().enumerate().fold(UeaElement::zero(&alg), |acc, (m, &(re, im))| {
        acc.add(&UeaElement::monomial(&alg, vec![m as u32], Complex64::new(re, im)).unwrap()).unwrap()
    })
}

fn sequence(kind: u8, extra: &[(f64, f64)]) -> TorusSequence {
    match kind {
        0 => TorusSequence::comb(),
        1 => TorusSequence::ones(),
        2 => TorusSequence::poly(1.5).unwrap(),
        3 => TorusSequence::geometric(0.7).unwrap(),
        _ => TorusSequence::finite(-(extra.len() as i64) / 2, extra.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap(),
    }
}

fn test_function(band: usize, raw: &[(f64, f64)]) -> TorusTestFunction {
    TorusTestFunction::new(band, raw.iter().take(2 * band + 1).map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap()
}

#[test]
fn comb_against_ones_sums_fourier_coefficients() {
    let f = TorusTestFunction::from_fn(6, |n| c(1.0 / (1.0 + (n * n) as f64)));
    let direct: Complex64 = (-6..=6).map(|n| c(1.0 / (1.0 + (n * n) as f64))).sum();
    let v = gmc_eval(&TorusSequence::comb(), &TorusSequence::ones(), &f);
    assert!((v - direct).norm() < 1e-14);
}

#[test]
fn direct_coefficient_of_finite_pair_is_pointwise() {
    let a = TorusSequence::finite(-1, vec![c(1.0), c(0.5), Complex64::new(0.0, 2.0)]).unwrap();
    let b = TorusSequence::finite(0, vec![c(0.3), c(-1.0)]).unwrap();
    let f = TorusTestFunction::from_fn(4, |n| Complex64::new(0.2 * n as f64, 1.0 / (1.0 + n.abs() as f64)));
    let model = Torus;
    let via_integral = model.integrate(&f, &mut |t| model.pointwise(&a, &b, t).unwrap()).unwrap();
    assert!((via_integral - gmc_eval(&a, &b, &f)).norm() < 1e-13);
}

#[test]
fn pointwise_rejects_two_distributions() {
    let r = Torus.pointwise(&TorusSequence::comb(), &TorusSequence::ones(), &0.1);
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn smoothing_makes_distributions_finite() {
    let f = TorusTestFunction::from_fn(5, |n| c((-(n * n) as f64).exp()));
    let s = smooth_by(&f, &TorusSequence::poly(3.0).unwrap());
    assert!(s.vector().has_zero_tail());
    assert_ne!(s.class(), GrowthClass::PolynomialGrowth);
}

#[test]
fn factorization_round_trip() {
    for r in [0.0, 0.5, 1.0, 2.5, 4.0] {
        let a = TorusSequence::poly(r).unwrap();
        let (d, u) = factorize_torus(&a).unwrap();
        assert_eq!(u.class(), GrowthClass::SquareSummable);
        let back = act_algebra(&d, &u).unwrap();
        for n in -300..=300 {
            let want = a.coeff(n);
            assert!((back.coeff(n) - want).norm() <= 1e-12 * want.norm().max(1.0), "{r} {n}");
        }
    }
}

#[test]
fn dominated_convergence_with_truncated_combs() {
    let f = TorusTestFunction::from_fn(8, |n| c(1.0 / (1.0 + (n * n) as f64)));
    let bs: Vec<TorusSequence> = (0..6).map(|m| project_subrep(&TorusSequence::ones(), move |n| n.abs() <= 2 * m)).collect();
    let env = GrowthEnvelope::new(1.0, 0.0).unwrap();
    let res = dominated_sequence_check(&TorusSequence::comb(), &bs, &TorusSequence::ones(), &f, env).unwrap();
    assert!(res.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(res[4], 0.0);
}

#[test]
fn functional_operations_compose() {
    let alg = torus_alg();
    let x = UeaElement::generator(&alg, 0).unwrap();
    let f = TorusTestFunction::from_fn(7, |n| Complex64::new(1.0 / (2.0 + n as f64 * n as f64), 0.1 * n as f64));
    let base = GmcFunctional::new(Torus, TorusSequence::comb(), TorusSequence::poly(1.0).unwrap());
    let chained = base.right_translate(&0.3).left_derive(&x).left_translate(&0.1);
    assert!(!chained.is_direct());
    let phi = act_group(0.3, &TorusSequence::comb());
    let psi = contragredient_algebra(&x, &contragredient_group(0.1, &TorusSequence::poly(1.0).unwrap())).unwrap();
    let direct = gmc_eval(&phi, &psi, &f);
    assert!((chained.eval(&f).unwrap() - direct).norm() < 1e-12 * (1.0 + direct.norm()));
}

#[test]
fn generator_acts_by_2_pi_i_n() {
    let x = UeaElement::generator(&torus_alg(), 0).unwrap();
    let out = act_algebra(&x, &TorusSequence::ones()).unwrap();
    for n in [-5i64, 0, 3, 40] {
        assert!((out.coeff(n) - Complex64::new(0.0, 2.0 * PI * n as f64)).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn covariance_identities(
        kinds in (0u8..5, 0u8..5),
        extra_a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..9),
        extra_b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..9),
        band in 0usize..=16,
        fcoef in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 33),
        dcoef in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=4),
        h in -1.0f64..1.0,
    ) {
        let (phi, psi) = (sequence(kinds.0, &extra_a), sequence(kinds.1, &extra_b));
        let f = test_function(band, &fcoef);
        let d = poly_element(&dcoef);
        let r = covariance_residuals(&Torus, &phi, &psi, &f, &h, &d).unwrap();
        prop_assert!(r.iter().all(|&x| x < 1e-13), "{:?}", r);
    }

    #[test]
    fn translations_are_actions(s in -1.0f64..1.0, u in -1.0f64..1.0, band in 0usize..8, fcoef in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 17), t in 0.0f64..1.0) {
        let f = test_function(band, &fcoef);
        let a = f.left_translate(s).left_translate(u).value(t);
        let b = f.left_translate(s + u).value(t);
        prop_assert!((a - b).norm() < 1e-12);
        prop_assert!((f.right_translate(s).value(t) - f.value(t + s)).norm() < 1e-12);
        prop_assert!((f.left_translate(s).value(t) - f.value(t - s)).norm() < 1e-12);
    }

    #[test]
    fn smoothing_is_linear_in_f(band in 0usize..8, c1 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 17), c2 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 17), alpha in -2.0f64..2.0) {
        let (f, g) = (test_function(band, &c1), test_function(band, &c2));
        let a = TorusSequence::poly(2.0).unwrap();
        let lhs = smooth_by(&f.linear_combination(c(alpha), &g, c(1.0)), &a);
        let (sf, sg) = (smooth_by(&f, &a), smooth_by(&g, &a));
        for n in -(band as i64)..=(band as i64) {
            prop_assert!((lhs.coeff(n) - (sf.coeff(n) * alpha + sg.coeff(n))).norm() < 1e-12);
        }
    }
}
