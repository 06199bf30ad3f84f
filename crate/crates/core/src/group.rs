//! Group models: group law, exponential coordinates, Haar quadrature and
//! modular data, plus the factorization contract for distribution vectors.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_complex::Complex64;

use crate::coeff::{CoefficientVector, GrowthClass};
use crate::error::{Error, Result};
use crate::uea::{LieAlgebra, UeaElement};

/// Quadrature nodes on the group with Haar weights.
pub type HaarRule<E> = Vec<(E, f64)>;

pub trait GroupModel {
    type Element: Clone + Debug + PartialEq;

    fn dimension(&self) -> usize;

    fn identity(&self) -> Self::Element;

    fn mul(&self, g: &Self::Element, h: &Self::Element) -> Self::Element;

    fn inverse(&self, g: &Self::Element) -> Self::Element;

    /// `exp(Σ x_i X_i)` for a coordinate vector of length [`dimension`](Self::dimension).
    fn exp(&self, x: &[f64]) -> Self::Element;

    /// Coordinates of an element (inverse of `exp` where it is a diffeomorphism).
    fn coordinates(&self, g: &Self::Element) -> Vec<f64>;

    fn lie_algebra(&self) -> Arc<LieAlgebra>;

    /// Tensor Haar quadrature over the coordinate box `region`, `nodes` per axis.
    fn haar_quadrature(&self, region: &[(f64, f64)], nodes: usize) -> HaarRule<Self::Element>;

    fn modular_function(&self, _g: &Self::Element) -> f64 {
        1.0
    }

    /// `δ(X_i) = d/ds Δ(exp sX_i)` at `s = 0`.
    fn modular_derivative(&self) -> Vec<f64> {
        vec![0.0; self.dimension()]
    }

    /// Distance between two elements in coordinates, for tolerance checks.
    fn distance(&self, g: &Self::Element, h: &Self::Element) -> f64 {
        self.coordinates(g)
            .iter()
            .zip(self.coordinates(h))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Model-specific witness `φ = π(D)u` for a polynomial-growth `φ`.
    fn factorize_distribution(&self, _phi: &CoefficientVector) -> Result<(UeaElement, CoefficientVector)> {
        Err(Error::Unsupported("this model provides no factorization strategy".into()))
    }

    /// The antipode `A(D)` with this model's modular derivative.
    fn antipode(&self, d: &UeaElement) -> Result<UeaElement> {
        d.antipode(&self.modular_derivative())
    }
}

/// Writes `φ = π(D)u` with `u` square-summable.
///
/// Square-summable and rapid-decay inputs are returned as `(1, φ)`; otherwise
/// the model's strategy is used.
pub fn factorize<M: GroupModel>(model: &M, phi: &CoefficientVector) -> Result<(UeaElement, CoefficientVector)> {
    match phi.class() {
        GrowthClass::RapidDecay | GrowthClass::SquareSummable => {
            Ok((UeaElement::one(&model.lie_algebra()), phi.clone()))
        }
        GrowthClass::PolynomialGrowth => {
            let (d, u) = model.factorize_distribution(phi)?;
            if u.class() == GrowthClass::PolynomialGrowth {
                return Err(Error::Precondition(format!(
                    "factorization strategy returned a {} witness",
                    u.class()
                )));
            }
            Ok((d, u))
        }
    }
}

/// Maximal associativity and inverse defects on the given triples.
pub fn group_law_defect<M: GroupModel>(model: &M, triples: &[(M::Element, M::Element, M::Element)]) -> (f64, f64) {
    let mut assoc: f64 = 0.0;
    let mut inv: f64 = 0.0;
    let e = model.identity();
    for (a, b, c) in triples {
        let left = model.mul(&model.mul(a, b), c);
        let right = model.mul(a, &model.mul(b, c));
        assoc = assoc.max(model.distance(&left, &right));
        inv = inv.max(model.distance(&model.mul(a, &model.inverse(a)), &e));
        inv = inv.max(model.distance(&model.mul(&model.inverse(a), a), &e));
    }
    (assoc, inv)
}

/// `Σ w f(g)` over a Haar rule.
pub fn integrate<E, F: FnMut(&E) -> Complex64>(rule: &HaarRule<E>, mut f: F) -> Complex64 {
    let mut acc = crate::quadrature::CompensatedSum::<Complex64>::zero();
    for (g, w) in rule {
        acc.add(f(g) * *w);
    }
    acc.value()
}
