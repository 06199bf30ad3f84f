//! The circle group `T = R/Z` acting on two-sided sequences by
//! `(π(t)a)_n = a_n e^{2πint}`, with `(π(X)a)_n = 2πin a_n`.
//!
//! Test functions are trigonometric polynomials stored by their Fourier
//! coefficients `f̂(n) = ∫_T f(t) e^{-2πint} dt`, so smoothing, translation and
//! differentiation are all diagonal and every identity holds up to rounding.
//!
//! Translations of test functions follow `(L(s)f)(t) = f(t - s)` and
//! `(R(s)f)(t) = f(t + s)`; derivatives follow `L(X)f = -f'` and `R(X)f = f'`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::coeff::{CoefficientVector, Formula, GrowthClass, GrowthEnvelope, IndexDomain};
use crate::error::{Error, Result};
use crate::group::{GroupModel, HaarRule};
use crate::quadrature::{gauss_legendre, CompensatedSum};
use crate::uea::{LieAlgebra, UeaElement};
use crate::TAU;

/// Envelope degree declared for the named rapid-decay generators.
pub const RAPID_DECAY_DEGREE: f64 = -12.0;

/// `e^{2πix}` with `x` first reduced to `[-1/2, 1/2]`.
pub fn cis_turns(x: f64) -> Complex64 {
    let f = x - x.round();
    Complex64::from_polar(1.0, TAU * f)
}

/// Representative of `x mod 1` in `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A sequence indexed by `Z`.
#[derive(Debug, Clone)]
pub struct TorusSequence(CoefficientVector);

impl TorusSequence {
    pub fn new(v: CoefficientVector) -> Result<Self> {
        if v.domain() != IndexDomain::Integers {
            return Err(Error::DomainMismatch);
        }
        Ok(Self(v))
    }

    pub fn unit(n: i64) -> Self {
        Self(CoefficientVector::unit(IndexDomain::Integers, n).expect("unit vector is valid"))
    }

    /// `a_n = 1` for all `n`: the Fourier coefficients of the Dirac comb.
    pub fn comb() -> Self {
        Self::named("constant", &[1.0, 0.0], GrowthEnvelope::new(1.0, 0.0).unwrap(), GrowthClass::PolynomialGrowth)
            .expect("comb is valid")
    }

    /// The constant sequence `1`, the right-hand argument of the Fourier-series theorems.
    pub fn ones() -> Self {
        Self::comb()
    }

    /// `a_n = n^r` (`|n|^r` for non-integer `r`).
    pub fn poly(r: f64) -> Result<Self> {
        let (c, class) = if r >= 0.0 {
            (1.0, GrowthClass::PolynomialGrowth)
        } else {
            let class = if r < -0.5 {
                GrowthClass::SquareSummable
            } else {
                GrowthClass::PolynomialGrowth
            };
            (2.0.powf(-r), class)
        };
        Self::named("power", &[r], GrowthEnvelope::new(c, r)?, class)
    }

    /// `a_n = q^{|n|}`, `0 < q < 1`.
    pub fn geometric(q: f64) -> Result<Self> {
        Self::named(
            "geometric",
            &[q],
            GrowthEnvelope::for_geometric(q, RAPID_DECAY_DEGREE)?,
            GrowthClass::RapidDecay,
        )
    }

    /// `a_n = e^{-a n²}`, `a > 0`.
    pub fn gaussian(a: f64) -> Result<Self> {
        Self::named(
            "gaussian",
            &[a],
            GrowthEnvelope::for_gaussian(a, RAPID_DECAY_DEGREE)?,
            GrowthClass::RapidDecay,
        )
    }

    /// A registered formula with a caller-declared envelope and class.
    pub fn named(name: &str, params: &[f64], envelope: GrowthEnvelope, class: GrowthClass) -> Result<Self> {
        let f = Formula::registered(name, params)?;
        Self::new(CoefficientVector::from_formula(IndexDomain::Integers, f, envelope, class)?)
    }

    /// Finitely supported sequence starting at index `start`.
    pub fn finite(start: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(CoefficientVector::finite(IndexDomain::Integers, start, coeffs)?)
    }

    pub fn vector(&self) -> &CoefficientVector {
        &self.0
    }

    pub fn into_vector(self) -> CoefficientVector {
        self.0
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.0.coeff(n)
    }

    pub fn class(&self) -> GrowthClass {
        self.0.class()
    }
}

/// A trigonometric polynomial `f(t) = Σ_{|n|≤B} f̂(n) e^{2πint}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusTestFunction {
    bandwidth: usize,
    coeffs: Vec<Complex64>,
}

impl TorusTestFunction {
    /// `coeffs[i]` is `f̂(i - B)`; the length must be `2B + 1`.
    pub fn new(bandwidth: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * bandwidth + 1 {
            return Err(Error::Precondition(format!(
                "bandwidth {bandwidth} needs {} coefficients, got {}",
                2 * bandwidth + 1,
                coeffs.len()
            )));
        }
        Ok(Self { bandwidth, coeffs })
    }

    /// As [`new`](Self::new), additionally requiring `f̂(-n) = conj f̂(n)`.
    pub fn real_valued(bandwidth: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let f = Self::new(bandwidth, coeffs)?;
        if !f.is_real_valued(1e-14) {
            return Err(Error::Precondition(
                "coefficients are not conjugate-symmetric, so f is not real-valued".into(),
            ));
        }
        Ok(f)
    }

    pub fn from_fn<F: Fn(i64) -> Complex64>(bandwidth: usize, g: F) -> Self {
        let b = bandwidth as i64;
        Self {
            bandwidth,
            coeffs: (-b..=b).map(g).collect(),
        }
    }

    pub fn zero(bandwidth: usize) -> Self {
        Self::from_fn(bandwidth, |_| Complex64::new(0.0, 0.0))
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `f̂(n)`, zero outside the band.
    pub fn hat(&self, n: i64) -> Complex64 {
        let b = self.bandwidth as i64;
        if n.abs() > b {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + b) as usize]
        }
    }

    pub fn is_real_valued(&self, tol: f64) -> bool {
        let b = self.bandwidth as i64;
        (0..=b).all(|n| {
            let (x, y) = (self.hat(n), self.hat(-n).conj());
            (x - y).norm() <= tol * (1.0 + x.norm())
        })
    }

    pub fn value(&self, t: f64) -> Complex64 {
        let b = self.bandwidth as i64;
        let mut acc = CompensatedSum::<Complex64>::zero();
        for n in -b..=b {
            acc.add(self.hat(n) * cis_turns(n as f64 * t));
        }
        acc.value()
    }

    fn map(&self, g: impl Fn(i64, Complex64) -> Complex64) -> Self {
        let b = self.bandwidth as i64;
        Self {
            bandwidth: self.bandwidth,
            coeffs: (-b..=b).map(|n| g(n, self.hat(n))).collect(),
        }
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        self.map(|_, c| c * alpha)
    }

    /// `α f + β g` on the larger band.
    pub fn linear_combination(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Self {
        let b = self.bandwidth.max(other.bandwidth);
        Self::from_fn(b, |n| alpha * self.hat(n) + beta * other.hat(n))
    }

    /// `(L(s)f)(t) = f(t - s)`.
    pub fn left_translate(&self, s: f64) -> Self {
        self.map(|n, c| c * cis_turns(-(n as f64) * s))
    }

    /// `(R(s)f)(t) = f(t + s)`.
    pub fn right_translate(&self, s: f64) -> Self {
        self.map(|n, c| c * cis_turns(n as f64 * s))
    }

    /// `L(D)f`: the generator acts as `-d/dt`, i.e. `f̂(n) ↦ p(-2πin) f̂(n)`.
    pub fn left_derive(&self, d: &UeaElement) -> Result<Self> {
        require_torus(d)?;
        Ok(self.map(|n, c| c * d.eval_polynomial(Complex64::new(0.0, -TAU * n as f64)).unwrap()))
    }

    /// `R(D)f`: the generator acts as `d/dt`, i.e. `f̂(n) ↦ p(2πin) f̂(n)`.
    pub fn right_derive(&self, d: &UeaElement) -> Result<Self> {
        require_torus(d)?;
        Ok(self.map(|n, c| c * d.eval_polynomial(Complex64::new(0.0, TAU * n as f64)).unwrap()))
    }
}

fn require_torus(d: &UeaElement) -> Result<()> {
    if d.algebra().dim() != 1 {
        return Err(Error::BasisMismatch(format!(
            "torus operators need a single generator, got {} generators",
            d.algebra().dim()
        )));
    }
    Ok(())
}

/// `π(t)a`: coefficientwise multiplication by `e^{2πint}`.
pub fn act_group(t: f64, a: &TorusSequence) -> TorusSequence {
    let v = a.vector();
    TorusSequence(v.map_indexed(move |n, c| c * cis_turns(n as f64 * t), v.envelope(), v.class()))
}

/// `π*(t)b = π(-t)b` under the bilinear pairing.
pub fn contragredient_group(t: f64, b: &TorusSequence) -> TorusSequence {
    act_group(-t, b)
}

/// `π(D)a`: `X^m` acts as multiplication by `(2πin)^m`.
pub fn act_algebra(d: &UeaElement, a: &TorusSequence) -> Result<TorusSequence> {
    require_torus(d)?;
    let v = a.vector();
    if d.is_zero() {
        return Ok(TorusSequence(CoefficientVector::zero(IndexDomain::Integers)));
    }
    let deg = d.degree();
    // |p(2πin)| ≤ Σ |c_m| (2π)^m (1+|n|)^deg
    let k: f64 = d.terms().map(|(a, c)| c.norm() * TAU.powi(a[0] as i32)).sum();
    let env = GrowthEnvelope::new(v.envelope().constant() * k, v.envelope().degree() + deg as f64)?;
    let class = match v.class() {
        GrowthClass::SquareSummable if deg > 0 => GrowthClass::PolynomialGrowth,
        c => c,
    };
    let d = d.clone();
    Ok(TorusSequence(v.map_indexed(
        move |n, c| c * d.eval_polynomial(Complex64::new(0.0, TAU * n as f64)).unwrap(),
        env,
        class,
    )))
}

/// `π*(D)b = π(^tD)b` under the bilinear pairing.
pub fn contragredient_algebra(d: &UeaElement, b: &TorusSequence) -> Result<TorusSequence> {
    act_algebra(&d.transpose(), b)
}

/// `π(f)a = (a_n f̂(-n))_n`, supported on the band of `f`.
pub fn smooth_by(f: &TorusTestFunction, a: &TorusSequence) -> TorusSequence {
    let b = f.bandwidth() as i64;
    let coeffs = (-b..=b).map(|n| a.coeff(n) * f.hat(-n)).collect();
    TorusSequence::finite(-b, coeffs).expect("finite vector is valid")
}

/// `⟨π(f)a, b⟩ = Σ_{|n|≤B} a_n f̂(-n) b_n`.
pub fn gmc_eval(a: &TorusSequence, b: &TorusSequence, f: &TorusTestFunction) -> Complex64 {
    let band = f.bandwidth() as i64;
    let mut acc = CompensatedSum::<Complex64>::zero();
    for n in -band..=band {
        acc.add(a.coeff(n) * f.hat(-n) * b.coeff(n));
    }
    acc.value()
}

/// `⟨Σ_{|n|≤m} a_n e^{2πint}, f⟩ = Σ_{|n|≤min(m,B)} a_n f̂(-n)`.
pub fn series_partial_sum(a: &TorusSequence, m: u64, f: &TorusTestFunction) -> Complex64 {
    let top = (m.min(f.bandwidth() as u64)) as i64;
    let mut acc = CompensatedSum::<Complex64>::zero();
    for n in -top..=top {
        acc.add(a.coeff(n) * f.hat(-n));
    }
    acc.value()
}

/// `|gmc_eval(a, b_m, f) - gmc_eval(a, b, f)|` for each `b_m`, after checking
/// that every `b_m` respects the common envelope.
pub fn dominated_sequence_check(
    a: &TorusSequence,
    bs: &[TorusSequence],
    b: &TorusSequence,
    f: &TorusTestFunction,
    envelope: GrowthEnvelope,
) -> Result<Vec<f64>> {
    let limit = gmc_eval(a, b, f);
    bs.iter()
        .enumerate()
        .map(|(m, bm)| {
            bm.vector().clone().with_envelope(envelope).map_err(|e| {
                Error::Precondition(format!("sequence b_{m} violates the common envelope: {e}"))
            })?;
            let band = f.bandwidth() as i64;
            bm.vector().check_against(envelope, -band, band + 1).map_err(|e| {
                Error::Precondition(format!("sequence b_{m} violates the common envelope: {e}"))
            })?;
            Ok((gmc_eval(a, bm, f) - limit).norm())
        })
        .collect()
}

/// `(1 - X²/4π²)^m`.
pub fn bessel_element(algebra: &Arc<LieAlgebra>, m: u32) -> UeaElement {
    let one = UeaElement::one(algebra);
    let x2 = UeaElement::monomial(algebra, vec![2], Complex64::new(-1.0 / (4.0 * PI * PI), 0.0)).unwrap();
    one.add(&x2).unwrap().pow(m)
}

/// Writes a polynomial-growth `a` as `π(D)u` with `D = (1 - X²/4π²)^m`,
/// `u_n = a_n / (1+n²)^m` and `m` the least integer with `2m ≥ r + 2`, so
/// that `u_n = O(n^{-2})` is square-summable. Other classes return `(1, a)`.
pub fn factorize_torus(a: &TorusSequence) -> Result<(UeaElement, TorusSequence)> {
    let alg = Arc::new(LieAlgebra::torus());
    let v = a.vector();
    if v.class() != GrowthClass::PolynomialGrowth {
        return Ok((UeaElement::one(&alg), a.clone()));
    }
    let r = v.envelope().degree();
    let m = (r / 2.0).ceil() + 1.0;
    if m <= 0.0 {
        return Ok((UeaElement::one(&alg), TorusSequence(v.clone().with_class(GrowthClass::SquareSummable))));
    }
    let m = m as u32;
    // (1+n²)^{-m} ≤ 2^m (1+|n|)^{-2m}
    let env = GrowthEnvelope::new(v.envelope().constant() * 2.0.powi(m as i32), r - 2.0 * m as f64)?;
    let u = v.map_indexed(
        move |n, c| c / (1.0 + (n as f64) * (n as f64)).powi(m as i32),
        env,
        GrowthClass::SquareSummable,
    );
    Ok((bessel_element(&alg, m), TorusSequence(u)))
}

/// Zeroes every coefficient whose index fails `keep`.
pub fn project_subrep<K>(a: &TorusSequence, keep: K) -> TorusSequence
where
    K: Fn(i64) -> bool + Send + Sync + Clone + 'static,
{
    let v = a.vector();
    TorusSequence(v.map_indexed(
        move |n, c| if keep(n) { c } else { Complex64::new(0.0, 0.0) },
        v.envelope(),
        v.class(),
    ))
}

/// The circle group in the coordinate `t ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Torus;

impl GroupModel for Torus {
    type Element = f64;

    fn dimension(&self) -> usize {
        1
    }

    fn identity(&self) -> f64 {
        0.0
    }

    fn mul(&self, g: &f64, h: &f64) -> f64 {
        wrap_unit(g + h)
    }

    fn inverse(&self, g: &f64) -> f64 {
        wrap_unit(-g)
    }

    fn exp(&self, x: &[f64]) -> f64 {
        wrap_unit(x[0])
    }

    /// Representative in `[-1/2, 1/2)`.
    fn coordinates(&self, g: &f64) -> Vec<f64> {
        vec![wrap_unit(g + 0.5) - 0.5]
    }

    fn lie_algebra(&self) -> Arc<LieAlgebra> {
        Arc::new(LieAlgebra::torus())
    }

    /// Equispaced nodes when the region covers the circle (exact for
    /// trigonometric polynomials of degree below `nodes`), Gauss–Legendre otherwise.
    fn haar_quadrature(&self, region: &[(f64, f64)], nodes: usize) -> HaarRule<f64> {
        let (a, b) = region.first().copied().unwrap_or((0.0, 1.0));
        if b - a >= 1.0 {
            let w = 1.0 / nodes as f64;
            (0..nodes).map(|j| (j as f64 * w, w)).collect()
        } else {
            let rule = gauss_legendre(nodes).reseat(a, b);
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&x, &w)| (wrap_unit(x), w))
                .collect()
        }
    }

    fn factorize_distribution(&self, phi: &CoefficientVector) -> Result<(UeaElement, CoefficientVector)> {
        let (d, u) = factorize_torus(&TorusSequence::new(phi.clone())?)?;
        Ok((d, u.into_vector()))
    }
}
