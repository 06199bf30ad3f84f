//! Generalized matrix coefficients `F_{φ,ψ}(f) = ⟨π(f)φ, ψ⟩` as lazily
//! evaluated functionals, with the translation and derivative actions
//! carried as provenance and pushed onto the test function on evaluation.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::coeff::GrowthClass;
use crate::error::{Error, Result};
use crate::group::GroupModel;
use crate::heisenberg::{self, HTestFunction, HeisenbergElement, HermiteVector, Schrodinger};
use crate::pairing::pair;
use crate::quadrature::CompensatedSum;
use crate::torus::{self, Torus, TorusSequence, TorusTestFunction};
use crate::uea::UeaElement;

/// A group model with a representation, a smoothing operator and test functions.
///
/// Translations follow `(L(h)f)(g) = f(h⁻¹g)` and `(R(h)f)(g) = f(gh)`; the
/// derivative actions are their differentials.
pub trait GmcModel: GroupModel + Clone {
    type Vector: Clone + fmt::Debug;
    type TestFunction: Clone + fmt::Debug;

    /// `π(f)φ`.
    fn smooth(&self, f: &Self::TestFunction, phi: &Self::Vector) -> Result<Self::Vector>;

    /// The bilinear pairing.
    fn pair(&self, a: &Self::Vector, b: &Self::Vector) -> Result<Complex64>;

    /// `⟨π(f)φ, ψ⟩`: smooth `φ`, then pair with `ψ`.
    fn gmc_eval(&self, phi: &Self::Vector, psi: &Self::Vector, f: &Self::TestFunction) -> Result<Complex64> {
        let smoothed = self.smooth(f, phi)?;
        self.pair(&smoothed, psi)
    }

    fn act_group(&self, g: &Self::Element, phi: &Self::Vector) -> Result<Self::Vector>;

    /// `π*(g) = π(g⁻¹)^T`.
    fn contragredient_group(&self, g: &Self::Element, psi: &Self::Vector) -> Result<Self::Vector>;

    fn act_algebra(&self, d: &UeaElement, phi: &Self::Vector) -> Result<Self::Vector>;

    /// `π*(D) = π(^tD)^T`.
    fn contragredient_algebra(&self, d: &UeaElement, psi: &Self::Vector) -> Result<Self::Vector>;

    fn left_translate(&self, f: &Self::TestFunction, h: &Self::Element) -> Self::TestFunction;

    fn right_translate(&self, f: &Self::TestFunction, h: &Self::Element) -> Self::TestFunction;

    fn left_derive(&self, f: &Self::TestFunction, d: &UeaElement) -> Result<Self::TestFunction>;

    fn right_derive(&self, f: &Self::TestFunction, d: &UeaElement) -> Result<Self::TestFunction>;

    /// `α f + β g`.
    fn combine(&self, f: &Self::TestFunction, alpha: Complex64, g: &Self::TestFunction, beta: Complex64) -> Self::TestFunction;

    /// `⟨π(g)φ, ψ⟩` for a pair with a smooth pointwise coefficient.
    fn pointwise(&self, phi: &Self::Vector, psi: &Self::Vector, g: &Self::Element) -> Result<Complex64>;

    /// `∫ f(g) h(g) dg` by the test function's own quadrature.
    fn integrate(&self, f: &Self::TestFunction, h: &mut dyn FnMut(&Self::Element) -> Complex64) -> Result<Complex64>;

    /// Default agreement tolerance for identities checked in this model.
    fn tolerance(&self) -> f64;
}

/// Per-model tolerances for identity checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceTable {
    /// Exact spectral paths on the torus.
    pub torus: f64,
    /// Quadrature and finite-difference paths on the Heisenberg group.
    pub heisenberg: f64,
}

impl Default for ToleranceTable {
    fn default() -> Self {
        Self {
            torus: 1e-13,
            heisenberg: 5e-5,
        }
    }
}

/// One operation applied to a functional.
#[derive(Debug, Clone)]
pub enum Provenance<E> {
    LeftTranslate(E),
    RightTranslate(E),
    LeftDerive(UeaElement),
    RightDerive(UeaElement),
}

impl<E: fmt::Debug> fmt::Display for Provenance<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LeftTranslate(h) => write!(f, "left-translated({h:?})"),
            Self::RightTranslate(h) => write!(f, "right-translated({h:?})"),
            Self::LeftDerive(d) => write!(f, "left-derived({d})"),
            Self::RightDerive(d) => write!(f, "right-derived({d})"),
        }
    }
}

/// `f ↦ ⟨π(f)φ, ψ⟩` followed by a stack of translations and derivatives.
#[derive(Debug, Clone)]
pub struct GmcFunctional<M: GmcModel> {
    model: M,
    phi: M::Vector,
    psi: M::Vector,
    ops: Vec<Provenance<M::Element>>,
}

impl<M: GmcModel> GmcFunctional<M> {
    pub fn new(model: M, phi: M::Vector, psi: M::Vector) -> Self {
        Self {
            model,
            phi,
            psi,
            ops: Vec::new(),
        }
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn phi(&self) -> &M::Vector {
        &self.phi
    }

    pub fn psi(&self) -> &M::Vector {
        &self.psi
    }

    pub fn provenance(&self) -> &[Provenance<M::Element>] {
        &self.ops
    }

    pub fn is_direct(&self) -> bool {
        self.ops.is_empty()
    }

    fn push(&self, op: Provenance<M::Element>) -> Self {
        let mut out = self.clone();
        out.ops.push(op);
        out
    }

    /// `L(h)F: f ↦ F(L(h⁻¹)f)`.
    pub fn left_translate(&self, h: &M::Element) -> Self {
        self.push(Provenance::LeftTranslate(h.clone()))
    }

    /// `R(h)F: f ↦ F(R(h⁻¹)f)`.
    pub fn right_translate(&self, h: &M::Element) -> Self {
        self.push(Provenance::RightTranslate(h.clone()))
    }

    /// `L(D)F: f ↦ F(L(^tD)f)`.
    pub fn left_derive(&self, d: &UeaElement) -> Self {
        self.push(Provenance::LeftDerive(d.clone()))
    }

    /// `R(D)F: f ↦ F(R(A(D))f)`.
    pub fn right_derive(&self, d: &UeaElement) -> Self {
        self.push(Provenance::RightDerive(d.clone()))
    }

    /// The test function the direct coefficient is finally evaluated on.
    pub fn pulled_back(&self, f: &M::TestFunction) -> Result<M::TestFunction> {
        let m = &self.model;
        let mut f = f.clone();
        for op in self.ops.iter().rev() {
            f = match op {
                Provenance::LeftTranslate(h) => m.left_translate(&f, &m.inverse(h)),
                Provenance::RightTranslate(h) => m.right_translate(&f, &m.inverse(h)),
                Provenance::LeftDerive(d) => m.left_derive(&f, &d.transpose())?,
                Provenance::RightDerive(d) => m.right_derive(&f, &m.antipode(d)?)?,
            };
        }
        Ok(f)
    }

    pub fn eval(&self, f: &M::TestFunction) -> Result<Complex64> {
        self.model.gmc_eval(&self.phi, &self.psi, &self.pulled_back(f)?)
    }

    /// The pointwise coefficient `g ↦ ⟨π(g)φ, ψ⟩` of a direct functional.
    pub fn smooth_function_view(&self) -> Result<impl Fn(&M::Element) -> Result<Complex64> + '_> {
        if !self.ops.is_empty() {
            return Err(Error::Unsupported(format!(
                "pointwise view of a derived functional ({})",
                self.describe()
            )));
        }
        Ok(move |g: &M::Element| self.model.pointwise(&self.phi, &self.psi, g))
    }

    pub fn describe(&self) -> String {
        let mut s = String::from("direct");
        for op in &self.ops {
            s = format!("{op} ∘ {s}");
        }
        s
    }
}

/// `max_f |F(f)|` over the probes, and whether it stays below `tol`.
pub fn orthogonality_test<M: GmcModel>(
    model: &M,
    phi: &M::Vector,
    psi: &M::Vector,
    probes: &[M::TestFunction],
    tol: f64,
) -> Result<(bool, f64)> {
    if probes.is_empty() {
        return Err(Error::Precondition("orthogonality needs at least one probe".into()));
    }
    let mut worst: f64 = 0.0;
    for f in probes {
        worst = worst.max(model.gmc_eval(phi, psi, f)?.norm());
    }
    Ok((worst < tol, worst))
}

/// `max_h |F(R(h⁻¹)f) - χ(h) F(f)|` over `(h, χ(h))` samples.
pub fn semi_invariance_residual<M: GmcModel>(
    model: &M,
    phi: &M::Vector,
    psi: &M::Vector,
    samples: &[(M::Element, Complex64)],
    f: &M::TestFunction,
) -> Result<f64> {
    let functional = GmcFunctional::new(model.clone(), phi.clone(), psi.clone());
    let base = functional.eval(f)?;
    let mut worst: f64 = 0.0;
    for (h, chi) in samples {
        let v = functional.right_translate(h).eval(f)?;
        worst = worst.max((v - chi * base).norm());
    }
    Ok(worst)
}

/// Residuals of the four covariance identities for one `(φ, ψ, f, h, D)`:
///
/// ```text
/// F_{π(h)φ,ψ}  = R(h) F_{φ,ψ}     F_{φ,π*(h)ψ} = L(h) F_{φ,ψ}
/// F_{π(D)φ,ψ}  = R(D) F_{φ,ψ}     F_{φ,π*(D)ψ} = L(D) F_{φ,ψ}
/// ```
pub fn covariance_residuals<M: GmcModel>(
    model: &M,
    phi: &M::Vector,
    psi: &M::Vector,
    f: &M::TestFunction,
    h: &M::Element,
    d: &UeaElement,
) -> Result<[f64; 4]> {
    let base = GmcFunctional::new(model.clone(), phi.clone(), psi.clone());
    let scale = |a: Complex64, b: Complex64| (a - b).norm() / (1.0 + a.norm().max(b.norm()));
    let r_group = scale(
        model.gmc_eval(&model.act_group(h, phi)?, psi, f)?,
        base.right_translate(h).eval(f)?,
    );
    let l_group = scale(
        model.gmc_eval(phi, &model.contragredient_group(h, psi)?, f)?,
        base.left_translate(h).eval(f)?,
    );
    let r_alg = scale(
        model.gmc_eval(&model.act_algebra(d, phi)?, psi, f)?,
        base.right_derive(d).eval(f)?,
    );
    let l_alg = scale(
        model.gmc_eval(phi, &model.contragredient_algebra(d, psi)?, f)?,
        base.left_derive(d).eval(f)?,
    );
    Ok([r_group, l_group, r_alg, l_alg])
}

impl GmcModel for Torus {
    type Vector = TorusSequence;
    type TestFunction = TorusTestFunction;

    fn smooth(&self, f: &TorusTestFunction, phi: &TorusSequence) -> Result<TorusSequence> {
        Ok(torus::smooth_by(f, phi))
    }

    fn pair(&self, a: &TorusSequence, b: &TorusSequence) -> Result<Complex64> {
        pair(a.vector(), b.vector())
    }

    fn gmc_eval(&self, phi: &TorusSequence, psi: &TorusSequence, f: &TorusTestFunction) -> Result<Complex64> {
        Ok(torus::gmc_eval(phi, psi, f))
    }

    fn act_group(&self, g: &f64, phi: &TorusSequence) -> Result<TorusSequence> {
        Ok(torus::act_group(*g, phi))
    }

    fn contragredient_group(&self, g: &f64, psi: &TorusSequence) -> Result<TorusSequence> {
        Ok(torus::contragredient_group(*g, psi))
    }

    fn act_algebra(&self, d: &UeaElement, phi: &TorusSequence) -> Result<TorusSequence> {
        torus::act_algebra(d, phi)
    }

    fn contragredient_algebra(&self, d: &UeaElement, psi: &TorusSequence) -> Result<TorusSequence> {
        torus::contragredient_algebra(d, psi)
    }

    fn left_translate(&self, f: &TorusTestFunction, h: &f64) -> TorusTestFunction {
        f.left_translate(*h)
    }

    fn right_translate(&self, f: &TorusTestFunction, h: &f64) -> TorusTestFunction {
        f.right_translate(*h)
    }

    fn left_derive(&self, f: &TorusTestFunction, d: &UeaElement) -> Result<TorusTestFunction> {
        f.left_derive(d)
    }

    fn right_derive(&self, f: &TorusTestFunction, d: &UeaElement) -> Result<TorusTestFunction> {
        f.right_derive(d)
    }

    fn combine(&self, f: &TorusTestFunction, alpha: Complex64, g: &TorusTestFunction, beta: Complex64) -> TorusTestFunction {
        f.linear_combination(alpha, g, beta)
    }

    /// `Σ a_n e^{2πint} b_n`; one side must be rapid-decay or finite.
    fn pointwise(&self, phi: &TorusSequence, psi: &TorusSequence, t: &f64) -> Result<Complex64> {
        let finite = phi.vector().has_zero_tail() || psi.vector().has_zero_tail();
        if psi.class() != GrowthClass::RapidDecay && phi.class() != GrowthClass::RapidDecay && !finite {
            return Err(Error::Precondition(format!(
                "the pointwise coefficient needs a rapid-decay side, got {} x {}",
                phi.class(),
                psi.class()
            )));
        }
        pair(torus::act_group(*t, phi).vector(), psi.vector())
    }

    /// Periodic trapezoid rule with `4B + 64` points.
    fn integrate(&self, f: &TorusTestFunction, h: &mut dyn FnMut(&f64) -> Complex64) -> Result<Complex64> {
        let m = 4 * f.bandwidth() + 64;
        let mut acc = CompensatedSum::<Complex64>::zero();
        for i in 0..m {
            let t = i as f64 / m as f64;
            acc.add(f.value(t) * h(&t));
        }
        Ok(acc.value() / m as f64)
    }

    fn tolerance(&self) -> f64 {
        ToleranceTable::default().torus
    }
}

impl GmcModel for Schrodinger {
    type Vector = HermiteVector;
    type TestFunction = HTestFunction;

    fn smooth(&self, f: &HTestFunction, phi: &HermiteVector) -> Result<HermiteVector> {
        heisenberg::smooth_by(f, phi, self.config.truncation, &self.config)
    }

    fn pair(&self, a: &HermiteVector, b: &HermiteVector) -> Result<Complex64> {
        pair(a.vector(), b.vector())
    }

    fn act_group(&self, g: &HeisenbergElement, phi: &HermiteVector) -> Result<HermiteVector> {
        heisenberg::act_group(g, phi, self.config.truncation, &self.config)
    }

    fn contragredient_group(&self, g: &HeisenbergElement, psi: &HermiteVector) -> Result<HermiteVector> {
        heisenberg::contragredient_group(g, psi, self.config.truncation, &self.config)
    }

    fn act_algebra(&self, d: &UeaElement, phi: &HermiteVector) -> Result<HermiteVector> {
        heisenberg::act_algebra(d, phi)
    }

    fn contragredient_algebra(&self, d: &UeaElement, psi: &HermiteVector) -> Result<HermiteVector> {
        heisenberg::contragredient_algebra(d, psi)
    }

    fn left_translate(&self, f: &HTestFunction, h: &HeisenbergElement) -> HTestFunction {
        f.left_translate(h)
    }

    fn right_translate(&self, f: &HTestFunction, h: &HeisenbergElement) -> HTestFunction {
        f.right_translate(h)
    }

    fn left_derive(&self, f: &HTestFunction, d: &UeaElement) -> Result<HTestFunction> {
        f.left_derive(d)
    }

    fn right_derive(&self, f: &HTestFunction, d: &UeaElement) -> Result<HTestFunction> {
        f.right_derive(d)
    }

    fn combine(&self, f: &HTestFunction, alpha: Complex64, g: &HTestFunction, beta: Complex64) -> HTestFunction {
        f.linear_combination(alpha, g, beta)
    }

    /// `e^{2πit} · ⟨π(p,q,0)φ, ψ⟩`.
    fn pointwise(&self, phi: &HermiteVector, psi: &HermiteVector, g: &HeisenbergElement) -> Result<Complex64> {
        let w = heisenberg::fourier_wigner(phi, psi, g.p, g.q, &self.config)?;
        Ok(torus::cis_turns(g.t) * w)
    }

    fn integrate(&self, f: &HTestFunction, h: &mut dyn FnMut(&HeisenbergElement) -> Complex64) -> Result<Complex64> {
        Ok(f.integrate_against(h))
    }

    fn tolerance(&self) -> f64 {
        ToleranceTable::default().heisenberg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uea::LieAlgebra;
    use alloc::sync::Arc;
    use alloc::vec;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn probe() -> TorusTestFunction {
        TorusTestFunction::from_fn(3, |n| Complex64::new(0.3 + 0.1 * n as f64, 0.05 * (n * n) as f64))
    }

    #[test]
    fn torus_translations_match_vector_side() {
        let a = TorusSequence::finite(-2, vec![c(1.0), c(-0.5), Complex64::new(0.0, 2.0), c(0.25), c(3.0)]).unwrap();
        let b = TorusSequence::geometric(0.5).unwrap();
        let f = probe();
        let base = GmcFunctional::new(Torus, a.clone(), b.clone());
        let s = 0.37;
        let lhs = base.left_translate(&s).eval(&f).unwrap();
        let rhs = Torus.gmc_eval(&a, &torus::contragredient_group(s, &b), &f).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
        let back = base.left_translate(&s).left_translate(&-s).eval(&f).unwrap();
        assert!((back - base.eval(&f).unwrap()).norm() < 1e-13);
        assert_eq!(base.left_translate(&0.0).eval(&f).unwrap(), base.eval(&f).unwrap());
    }

    #[test]
    fn torus_covariance_identities() {
        let alg = Arc::new(LieAlgebra::torus());
        let x = UeaElement::generator(&alg, 0).unwrap();
        let d = x.pow(2).add(&x.scale(c(0.5))).unwrap();
        let a = TorusSequence::poly(1.0).unwrap();
        let b = TorusSequence::gaussian(0.3).unwrap();
        let r = covariance_residuals(&Torus, &a, &b, &probe(), &0.21, &d).unwrap();
        assert!(r.iter().all(|&v| v < 1e-13), "{r:?}");
    }

    #[test]
    fn torus_view_and_quadrature_agree() {
        let a = TorusSequence::unit(1);
        let b = TorusSequence::ones();
        let fun = GmcFunctional::new(Torus, a.clone(), b.clone());
        let view = fun.smooth_function_view().unwrap();
        let v = view(&0.125).unwrap();
        assert!((v - torus::cis_turns(0.125)).norm() < 1e-15);
        let f = probe();
        let mut h = |t: &f64| view(t).unwrap();
        let q = Torus.integrate(&f, &mut h).unwrap();
        assert!((q - fun.eval(&f).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn orthogonality_examples() {
        let probes = [probe(), probe().right_translate(0.3)];
        let (ok, worst) = orthogonality_test(&Torus, &TorusSequence::unit(1), &TorusSequence::unit(2), &probes, 1e-13).unwrap();
        assert!(ok && worst == 0.0);
        let (ok, _) = orthogonality_test(&Torus, &TorusSequence::comb(), &TorusSequence::ones(), &probes, 1e-13).unwrap();
        assert!(!ok);
    }

    #[test]
    fn torus_semi_invariance() {
        let k = 3;
        let samples: Vec<(f64, Complex64)> = [0.1, 0.25, 0.8].iter().map(|&t| (t, torus::cis_turns(k as f64 * t))).collect();
        let r = semi_invariance_residual(&Torus, &TorusSequence::unit(k), &TorusSequence::ones(), &samples, &probe()).unwrap();
        assert!(r < 1e-13);
        let r = semi_invariance_residual(&Torus, &TorusSequence::comb(), &TorusSequence::ones(), &[(0.0, c(1.0))], &probe()).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn linearity() {
        let a = TorusSequence::comb();
        let b = TorusSequence::ones();
        let fun = GmcFunctional::new(Torus, a, b);
        let (f, g) = (probe(), probe().left_translate(0.4));
        let (al, be) = (Complex64::new(0.3, -1.0), c(2.0));
        let lhs = fun.eval(&Torus.combine(&f, al, &g, be)).unwrap();
        let rhs = al * fun.eval(&f).unwrap() + be * fun.eval(&g).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn heisenberg_identity_view() {
        let e0 = HermiteVector::basis(0);
        let fun = GmcFunctional::new(Schrodinger::default(), e0.clone(), e0);
        let view = fun.smooth_function_view().unwrap();
        assert!((view(&HeisenbergElement::IDENTITY).unwrap() - c(1.0)).norm() < 1e-12);
    }
}
