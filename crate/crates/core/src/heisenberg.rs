//! The Schrödinger representation of the 3-dimensional Heisenberg group,
//! realized on Hermite coefficients.
//!
//! Elements are written in exponential coordinates `(p, q, t)`, with
//!
//! ```text
//! (p₁,q₁,t₁)·(p₂,q₂,t₂) = (p₁+p₂, q₁+q₂, t₁+t₂ + (p₁q₂ − q₁p₂)/2)
//! (π(p,q,t)φ)(x)        = e^{2πi(t + qx + pq/2)} φ(x + p)
//! ```
//!
//! so that `P = d/dx`, `Q = 2πix`, `Z = 2πi` and `[P, Q] = Z`. Vectors are
//! coefficient sequences against the orthonormal Hermite functions `h_k`
//! (see [`crate::hermite`]): rapid decay is the Schwartz space, polynomial
//! growth the tempered distributions.
//!
//! Group actions and smoothing operators are evaluated in `x`-space by
//! Gauss–Hermite quadrature. With `x = -p/2 + y/√(2π)` the product
//! `h_k(x) h_j(x+p)` becomes `e^{-y²}` times a polynomial, and the phase
//! `e^{2πi(qx + pq/2)}` becomes `e^{i√(2π) q y}`, independent of `p`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::coeff::{CoefficientVector, Formula, GrowthClass, GrowthEnvelope, IndexDomain, Tail};
use crate::error::{Error, Result};
use crate::group::{GroupModel, HaarRule};
use crate::hermite::fill_hermite_functions;
use crate::pairing::pair;
use crate::quadrature::{gauss_hermite_scaled, gauss_legendre, CompensatedSum, Rule};
use crate::torus::cis_turns;
use crate::uea::{word_of, LieAlgebra, UeaElement};

/// Largest Gauss–Hermite rule used; beyond it `e^{y²}` overflows at the outer nodes.
const MAX_X_NODES: usize = 1024;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HeisenbergElement {
    pub p: f64,
    pub q: f64,
    pub t: f64,
}

impl HeisenbergElement {
    pub const IDENTITY: Self = Self { p: 0.0, q: 0.0, t: 0.0 };

    pub fn new(p: f64, q: f64, t: f64) -> Self {
        Self { p, q, t }
    }

    pub fn central(t: f64) -> Self {
        Self::new(0.0, 0.0, t)
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.p, -self.q, -self.t)
    }

    pub fn mul(&self, h: &Self) -> Self {
        group_mul(self, h)
    }
}

impl fmt::Display for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.q, self.t)
    }
}

pub fn group_mul(g: &HeisenbergElement, h: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement::new(
        g.p + h.p,
        g.q + h.q,
        g.t + h.t + 0.5 * (g.p * h.q - g.q * h.p),
    )
}

/// Coefficients against `h_0, h_1, …`.
#[derive(Debug, Clone)]
pub struct HermiteVector(CoefficientVector);

impl HermiteVector {
    pub fn new(v: CoefficientVector) -> Result<Self> {
        if v.domain() != IndexDomain::Naturals {
            return Err(Error::DomainMismatch);
        }
        Ok(Self(v))
    }

    /// The basis vector `e_k = h_k`.
    pub fn basis(k: usize) -> Self {
        Self(CoefficientVector::unit(IndexDomain::Naturals, k as i64).expect("unit vector is valid"))
    }

    pub fn finite(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(CoefficientVector::finite(IndexDomain::Naturals, 0, coeffs)?)
    }

    /// The unit-norm Gaussian `(2/σ²)^{1/4} e^{-πx²/σ²}`; `σ² = 1` is `e_0`.
    pub fn dilated_gaussian(s2: f64) -> Result<Self> {
        let f = Formula::registered("dilated_gaussian", &[s2])?;
        let tau = ((s2 - 1.0) / (s2 + 1.0)).abs();
        let lead = (2.0 * s2.sqrt() / (1.0 + s2)).sqrt();
        // √((2m)!)/(2^m m!) ≤ 1, so |c_k| ≤ lead · (√τ)^k
        let env = if tau == 0.0 {
            GrowthEnvelope::new(lead * (1.0 + 1e-12), -12.0)?
        } else {
            let g = GrowthEnvelope::for_geometric(tau.sqrt(), -12.0)?;
            GrowthEnvelope::new(g.constant() * lead, g.degree())?
        };
        Self::new(CoefficientVector::from_formula(IndexDomain::Naturals, f, env, GrowthClass::RapidDecay)?)
    }

    /// The wide Gaussian `e^{-πx²/2}` (`σ² = 2`), a rapid-decay vector with an infinite tail.
    pub fn gauss() -> Self {
        Self::dilated_gaussian(2.0).expect("gaussian is valid")
    }

    /// `c_k = k^r` (with `c_0 = 1` unless `r > 0`), a polynomial-growth vector.
    pub fn poly_growth(r: f64) -> Result<Self> {
        let f = Formula::registered("power", &[r])?;
        let c = if r >= 0.0 { 1.0 } else { 2.0.powf(-r) };
        let class = if r < -0.5 {
            GrowthClass::SquareSummable
        } else {
            GrowthClass::PolynomialGrowth
        };
        Self::new(CoefficientVector::from_formula(IndexDomain::Naturals, f, GrowthEnvelope::new(c, r)?, class)?)
    }

    pub fn vector(&self) -> &CoefficientVector {
        &self.0
    }

    pub fn into_vector(self) -> CoefficientVector {
        self.0
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.0.coeff(k as i64)
    }

    pub fn coeffs(&self, n: usize) -> Vec<Complex64> {
        self.0.coeffs(0, n as i64)
    }

    pub fn class(&self) -> GrowthClass {
        self.0.class()
    }

    /// `(Σ_{k<n} |c_k|²)^{1/2}`.
    pub fn partial_norm(&self, n: usize) -> f64 {
        let mut acc = CompensatedSum::<f64>::new();
        for k in 0..n {
            acc.add(self.coeff(k).norm_sqr());
        }
        acc.value().sqrt()
    }
}

/// The point evaluation `δ`: `c_k = h_k(0)`, envelope `1.2 (1+k)^0`.
pub fn dirac_delta() -> HermiteVector {
    let f = Formula::registered("hermite_zero", &[]).expect("registered");
    HermiteVector(
        CoefficientVector::from_formula(
            IndexDomain::Naturals,
            f,
            GrowthEnvelope::new(1.2, 0.0).expect("valid"),
            GrowthClass::PolynomialGrowth,
        )
        .expect("h_k(0) fits the envelope"),
    )
}

/// Numerical parameters of the Schrödinger model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchrodingerConfig {
    /// Output truncation `N`.
    pub truncation: usize,
    /// Extra input coefficients read beyond `N` from infinite tails.
    pub inner_extra: usize,
    /// Minimum Gauss–Hermite nodes for `x`-integrals (raised automatically
    /// to keep the polynomial part exact).
    pub x_nodes: usize,
    /// Gauss–Legendre nodes per axis for test functions.
    pub legendre_nodes: usize,
    /// Base step of the finite-difference Lie derivatives.
    pub fd_step: f64,
    /// Agreement required between the two `x`-quadrature resolutions.
    pub quad_tol: f64,
    /// Agreement required between the two smoothing resolutions, relative to
    /// `1 + max|c_k|`.
    pub smooth_tol: f64,
    /// Convergence target for the adaptive pointwise coefficient.
    pub pair_tol: f64,
    /// Largest truncation the adaptive routines may reach.
    pub max_truncation: usize,
}

impl Default for SchrodingerConfig {
    fn default() -> Self {
        Self {
            truncation: 40,
            inner_extra: 40,
            x_nodes: 80,
            legendre_nodes: 48,
            fd_step: 1e-3,
            quad_tol: 1e-10,
            smooth_tol: 1e-4,
            pair_tol: 1e-12,
            max_truncation: 512,
        }
    }
}

impl SchrodingerConfig {
    fn x_rule_size(&self, j: usize, n: usize, q: f64) -> usize {
        let phase = q.abs() * (1.5 * ((j + n) as f64).sqrt() + 10.0);
        let exact = (j + n).div_ceil(2) + 24 + phase.ceil() as usize;
        self.x_nodes.max(exact).min(MAX_X_NODES)
    }

    /// A product bump with this configuration's quadrature settings.
    pub fn bump3(&self, center: HeisenbergElement, radius: f64, mass: f64) -> Result<HTestFunction> {
        HTestFunction::bump3(center, radius, mass, self.legendre_nodes, self.fd_step)
    }
}

/// Input coefficients actually read from `phi`: the whole support of a
/// finite vector, `n + extra` entries otherwise.
fn input_window(phi: &HermiteVector, n: usize, extra: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::Precondition("truncation N must be positive".into()));
    }
    let v = phi.vector();
    if v.has_zero_tail() {
        if v.end() as usize > n {
            return Err(Error::Precondition(format!(
                "truncation N = {n} is below the stored support (last index {})",
                v.end() - 1
            )));
        }
        Ok(phi.coeffs(v.end().max(1) as usize))
    } else {
        Ok(phi.coeffs(n + extra))
    }
}

/// Scratch buffers for the `x`-quadrature kernels.
struct Scratch {
    out: Vec<f64>,
    inner: Vec<f64>,
}

/// `(π(p,q,t)φ)_k` for `k < n`, by the scaled Gauss–Hermite rule `rule`.
fn group_kernel(g: &HeisenbergElement, phi: &[Complex64], n: usize, rule: &Rule) -> Vec<Complex64> {
    let mut acc: Vec<CompensatedSum<Complex64>> = vec![CompensatedSum::zero(); n];
    let mut s = Scratch {
        out: Vec::new(),
        inner: Vec::new(),
    };
    let root = (2.0 * PI).sqrt();
    let central = cis_turns(g.t);
    for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
        let x = -0.5 * g.p + y / root;
        let factor = w / root;
        fill_hermite_functions(x + g.p, phi.len(), &mut s.inner);
        let big_phi: Complex64 = phi.iter().zip(&s.inner).map(|(c, h)| c * h).sum();
        if big_phi == zero() {
            continue;
        }
        fill_hermite_functions(x, n, &mut s.out);
        let c = central * cis_turns(g.q * y / root) * big_phi * factor;
        for (a, &h) in acc.iter_mut().zip(&s.out) {
            a.add(c * h);
        }
    }
    acc.into_iter().map(|a| a.value()).collect()
}

/// `M_{kj}(g) = ⟨π(g)h_j, h_k⟩ = ∫ e^{2πi(t+qx+pq/2)} h_j(x+p) h_k(x) dx`,
/// checked at two Gauss–Hermite resolutions.
pub fn matrix_element(g: &HeisenbergElement, j: usize, k: usize, cfg: &SchrodingerConfig) -> Result<Complex64> {
    let mut phi = vec![zero(); j + 1];
    phi[j] = Complex64::new(1.0, 0.0);
    let n1 = cfg.x_rule_size(j + 1, k + 1, g.q);
    let n2 = (n1 + 16).min(MAX_X_NODES + 16);
    let coarse = group_kernel(g, &phi, k + 1, &gauss_hermite_scaled(n1))[k];
    let fine = group_kernel(g, &phi, k + 1, &gauss_hermite_scaled(n2))[k];
    if (fine - coarse).norm() > cfg.quad_tol {
        return Err(Error::Accuracy {
            coarse,
            fine,
            tolerance: cfg.quad_tol,
        });
    }
    Ok(fine)
}

/// First `n` coefficients of `π(g)φ` for a rapid-decay or finite `φ`.
pub fn act_group(g: &HeisenbergElement, phi: &HermiteVector, n: usize, cfg: &SchrodingerConfig) -> Result<HermiteVector> {
    if phi.class() == GrowthClass::PolynomialGrowth && !phi.vector().has_zero_tail() {
        return Err(Error::Precondition(
            "the group acts on smooth or finite vectors; smooth a distribution first".into(),
        ));
    }
    let input = input_window(phi, n, cfg.inner_extra)?;
    let n1 = cfg.x_rule_size(input.len(), n, g.q);
    let fine = group_kernel(g, &input, n, &gauss_hermite_scaled(n1));
    let coarse = group_kernel(g, &input, n, &gauss_hermite_scaled(n1 - 12));
    let (k, diff) = max_diff(&fine, &coarse);
    if diff > cfg.quad_tol {
        return Err(Error::Accuracy {
            coarse: coarse[k],
            fine: fine[k],
            tolerance: cfg.quad_tol,
        });
    }
    HermiteVector::finite(fine)
}

/// `π*(g)ψ = π(g⁻¹)^T ψ = π(p, -q, -t)ψ` under the bilinear pairing.
pub fn contragredient_group(
    g: &HeisenbergElement,
    psi: &HermiteVector,
    n: usize,
    cfg: &SchrodingerConfig,
) -> Result<HermiteVector> {
    act_group(&HeisenbergElement::new(g.p, -g.q, -g.t), psi, n, cfg)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> (usize, f64) {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .enumerate()
        .fold((0, 0.0), |best, (i, d)| if d > best.1 { (i, d) } else { best })
}

/// `|‖π(g)φ‖ - ‖φ‖|` at truncation `n`.
pub fn unitarity_defect(g: &HeisenbergElement, phi: &HermiteVector, n: usize, cfg: &SchrodingerConfig) -> Result<f64> {
    let out = act_group(g, phi, n, cfg)?;
    let before = phi.partial_norm(n + cfg.inner_extra);
    Ok((out.partial_norm(n) - before).abs())
}

/// Index of a generator in the `P, Q, Z` basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Generator {
    P,
    Q,
    Z,
}

const GENERATORS: [Generator; 3] = [Generator::P, Generator::Q, Generator::Z];

/// Applies one generator to the window `w` holding indices `lo..lo+len`;
/// the result is valid on `lo+1..lo+len-1` and is returned on that range.
fn ladder_step(op: Generator, w: &[Complex64], lo: i64) -> Vec<Complex64> {
    let sp = PI.sqrt();
    (1..w.len().saturating_sub(1))
        .map(|i| {
            let k = lo + i as i64;
            if k < 0 {
                return zero();
            }
            let kf = k as f64;
            let down = (kf + 1.0).sqrt() * w[i + 1];
            let up = kf.sqrt() * w[i - 1];
            match op {
                Generator::P => (down - up) * sp,
                Generator::Q => (down + up) * Complex64::new(0.0, sp),
                Generator::Z => w[i] * Complex64::new(0.0, 2.0 * PI),
            }
        })
        .collect()
}

/// `(π(X^α)φ)_k` computed from the window `φ_{k-|α|} … φ_{k+|α|}`.
fn monomial_at(alpha: &[u32], src: &CoefficientVector, k: i64) -> Complex64 {
    let word = word_of(alpha);
    let m = word.len() as i64;
    let mut w: Vec<Complex64> = (k - m..=k + m).map(|i| src.coeff(i)).collect();
    for (lo, &g) in (k - m..).zip(word.iter().rev()) {
        w = ladder_step(GENERATORS[g], &w, lo);
    }
    w[0]
}

/// `π(D)φ` with `P = √π(A - A†)`, `Q = i√π(A + A†)`, `Z = 2πi`.
pub fn act_algebra(d: &UeaElement, phi: &HermiteVector) -> Result<HermiteVector> {
    if *d.algebra().as_ref() != LieAlgebra::heisenberg() {
        return Err(Error::BasisMismatch("expected the P, Q, Z basis with [P, Q] = Z".into()));
    }
    let v = phi.vector();
    if d.is_zero() {
        return Ok(HermiteVector(CoefficientVector::zero(IndexDomain::Naturals)));
    }
    let deg = d.degree() as i64;
    let terms: Vec<(Vec<u32>, Complex64)> = d.terms().map(|(a, c)| (a.clone(), *c)).collect();

    // envelope: each ladder step multiplies the constant by √π(1 + 2^{|r|})
    // and raises the degree by 1/2; Z multiplies by 2π
    let r0 = v.envelope().degree();
    let mut top = f64::NEG_INFINITY;
    let mut parts = Vec::new();
    for (alpha, c) in &terms {
        let (mut cst, mut r) = (v.envelope().constant(), r0);
        for &g in word_of(alpha).iter().rev() {
            match GENERATORS[g] {
                Generator::Z => cst *= 2.0 * PI,
                _ => {
                    cst *= PI.sqrt() * (1.0 + 2.0.powf(r.abs()));
                    r += 0.5;
                }
            }
        }
        top = top.max(r);
        parts.push(c.norm() * cst);
    }
    let env = GrowthEnvelope::new(parts.iter().sum::<f64>().max(f64::MIN_POSITIVE), top)?;
    let raises = top > r0;
    let class = match v.class() {
        GrowthClass::SquareSummable if raises => GrowthClass::PolynomialGrowth,
        c => c,
    };

    let eval_at = {
        let terms = terms.clone();
        move |src: &CoefficientVector, k: i64| -> Complex64 {
            let mut acc = zero();
            for (alpha, c) in &terms {
                acc += c * monomial_at(alpha, src, k);
            }
            acc
        }
    };
    let hi = if v.has_zero_tail() { v.end() + deg } else { v.end().max(0) + deg };
    let prefix: Vec<Complex64> = (0..hi).map(|k| eval_at(v, k)).collect();
    let tail = if v.has_zero_tail() {
        Tail::Zero
    } else {
        let src = v.clone();
        Tail::Formula(Formula::custom("weyl_action", move |k| eval_at(&src, k)))
    };
    Ok(HermiteVector(CoefficientVector::from_parts(
        IndexDomain::Naturals,
        0,
        prefix,
        tail,
        env,
        class,
    )))
}

/// `π*(D)ψ = -π(X)^T` on generators: `P ↦ P`, `Q ↦ -Q`, `Z ↦ -Z`.
pub fn contragredient_algebra(d: &UeaElement, psi: &HermiteVector) -> Result<HermiteVector> {
    let alg = d.algebra().clone();
    let mut flipped = UeaElement::zero(&alg);
    for (alpha, c) in d.terms() {
        let sign = if (alpha[1] + alpha[2]) % 2 == 0 { 1.0 } else { -1.0 };
        flipped = flipped.add(&UeaElement::monomial(&alg, alpha.clone(), c * sign)?)?;
    }
    act_algebra(&flipped, psi)
}

type HFn = dyn Fn(&HeisenbergElement) -> Complex64 + Send + Sync;
type HGrad = dyn Fn(&HeisenbergElement) -> [Complex64; 3] + Send + Sync;

/// Sheared box `{p ∈ [p₀,p₁], q ∈ [q₀,q₁], t - (a p + b q) ∈ [t₀,t₁]}` in
/// exponential coordinates, with `shear = (a, b)`.
///
/// Left and right translations map such boxes onto boxes of the same kind,
/// so translated test functions keep their exact support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBox {
    pub p: (f64, f64),
    pub q: (f64, f64),
    pub t: (f64, f64),
    pub shear: (f64, f64),
}

impl SupportBox {
    pub fn new(p: (f64, f64), q: (f64, f64), t: (f64, f64)) -> Self {
        Self { p, q, t, shear: (0.0, 0.0) }
    }

    pub fn cube(center: HeisenbergElement, half: f64) -> Self {
        Self::new(
            (center.p - half, center.p + half),
            (center.q - half, center.q + half),
            (center.t - half, center.t + half),
        )
    }

    /// The `t`-interval above `(p, q)`.
    pub fn t_range(&self, p: f64, q: f64) -> (f64, f64) {
        let off = self.shear.0 * p + self.shear.1 * q;
        (self.t.0 + off, self.t.1 + off)
    }

    /// Smallest `t`-interval containing every fibre.
    pub fn t_bounds(&self) -> (f64, f64) {
        let (lo, hi) = min_max(&self.corners().map(|c| self.shear.0 * c.p + self.shear.1 * c.q));
        (self.t.0 + lo, self.t.1 + hi)
    }

    pub fn contains(&self, g: &HeisenbergElement) -> bool {
        let inside = |x: f64, (a, b): (f64, f64)| x >= a && x <= b;
        inside(g.p, self.p) && inside(g.q, self.q) && inside(g.t, self.t_range(g.p, g.q))
    }

    /// A box containing both; sheared alike when the shears agree, otherwise
    /// axis-aligned.
    pub fn union(&self, other: &Self) -> Self {
        let u = |a: (f64, f64), b: (f64, f64)| (a.0.min(b.0), a.1.max(b.1));
        if self.shear == other.shear {
            let mut p = Self::new(u(self.p, other.p), u(self.q, other.q), u(self.t, other.t));
            p.shear = self.shear;
            return p;
        }
        Self::new(u(self.p, other.p), u(self.q, other.q), u(self.t_bounds(), other.t_bounds()))
    }

    fn corners(&self) -> [HeisenbergElement; 4] {
        [
            HeisenbergElement::new(self.p.0, self.q.0, 0.0),
            HeisenbergElement::new(self.p.0, self.q.1, 0.0),
            HeisenbergElement::new(self.p.1, self.q.0, 0.0),
            HeisenbergElement::new(self.p.1, self.q.1, 0.0),
        ]
    }

    fn translated(&self, h: &HeisenbergElement, shear: (f64, f64)) -> Self {
        let shift = h.t - self.shear.0 * h.p - self.shear.1 * h.q;
        Self {
            p: (self.p.0 + h.p, self.p.1 + h.p),
            q: (self.q.0 + h.q, self.q.1 + h.q),
            t: (self.t.0 + shift, self.t.1 + shift),
            shear,
        }
    }

    /// `{h·g : g in self}`.
    pub fn left_image(&self, h: &HeisenbergElement) -> Self {
        self.translated(h, (self.shear.0 - 0.5 * h.q, self.shear.1 + 0.5 * h.p))
    }

    /// `{g·h : g in self}`.
    pub fn right_image(&self, h: &HeisenbergElement) -> Self {
        self.translated(h, (self.shear.0 + 0.5 * h.q, self.shear.1 - 0.5 * h.p))
    }
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}

/// A compactly supported test function on the Heisenberg group.
#[derive(Clone)]
pub struct HTestFunction {
    eval: Arc<HFn>,
    gradient: Option<Arc<HGrad>>,
    support: SupportBox,
    nodes: usize,
    fd_step: f64,
    label: String,
}

impl fmt::Debug for HTestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HTestFunction")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("nodes", &self.nodes)
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl HTestFunction {
    /// Wraps a closure, spot-checking that it vanishes just outside `support`.
    pub fn new<F>(eval: F, support: SupportBox, nodes: usize, fd_step: f64) -> Result<Self>
    where
        F: Fn(&HeisenbergElement) -> Complex64 + Send + Sync + 'static,
    {
        if nodes < 2 || !(fd_step > 0.0) {
            return Err(Error::Precondition(format!(
                "need at least 2 nodes and a positive step (got {nodes}, {fd_step})"
            )));
        }
        let f = Self {
            eval: Arc::new(eval),
            gradient: None,
            support,
            nodes,
            fd_step,
            label: "closure".into(),
        };
        f.check_support()?;
        Ok(f)
    }

    fn derived(&self, eval: Arc<HFn>, support: SupportBox, label: String) -> Self {
        Self {
            eval,
            gradient: None,
            support,
            nodes: self.nodes,
            fd_step: self.fd_step,
            label,
        }
    }

    pub fn zero(support: SupportBox, nodes: usize, fd_step: f64) -> Result<Self> {
        Self::new(|_| zero(), support, nodes, fd_step)
    }

    /// `mass · b(p-p₀) b(q-q₀) b(t-t₀)` with `b` the unit-mass bump of the
    /// given radius.
    pub fn bump3(center: HeisenbergElement, radius: f64, mass: f64, nodes: usize, fd_step: f64) -> Result<Self> {
        let mut f = Self::bump3_axes(center, [radius; 3], mass, nodes, fd_step)?;
        f.label = format!("bump3(center={center}, radius={radius}, mass={mass})");
        Ok(f)
    }

    /// Product bump with separate radii along `p`, `q` and `t`.
    pub fn bump3_axes(center: HeisenbergElement, radii: [f64; 3], mass: f64, nodes: usize, fd_step: f64) -> Result<Self> {
        let [bp, bq, bt] = [
            crate::mollifier::BumpProfile::new(radii[0])?,
            crate::mollifier::BumpProfile::new(radii[1])?,
            crate::mollifier::BumpProfile::new(radii[2])?,
        ];
        let support = SupportBox::new(
            (center.p - radii[0], center.p + radii[0]),
            (center.q - radii[1], center.q + radii[1]),
            (center.t - radii[2], center.t + radii[2]),
        );
        let eval = move |g: &HeisenbergElement| {
            Complex64::new(mass * bp.value(g.p - center.p) * bq.value(g.q - center.q) * bt.value(g.t - center.t), 0.0)
        };
        let mut f = Self::new(eval, support, nodes, fd_step)?;
        f.label = format!("bump3(center={center}, radii={radii:?}, mass={mass})");
        f.gradient = Some(Arc::new(move |g: &HeisenbergElement| {
            let (a, b, c) = (g.p - center.p, g.q - center.q, g.t - center.t);
            let (va, vb, vc) = (bp.value(a), bq.value(b), bt.value(c));
            let (da, db, dc) = (bp.derivative(a), bq.derivative(b), bt.derivative(c));
            [
                Complex64::new(mass * da * vb * vc, 0.0),
                Complex64::new(mass * va * db * vc, 0.0),
                Complex64::new(mass * va * vb * dc, 0.0),
            ]
        }));
        Ok(f)
    }

    /// Attaches coordinate partials `(∂_p f, ∂_q f, ∂_t f)` used for
    /// first-order Lie derivatives instead of finite differences.
    pub fn with_gradient<G>(mut self, grad: G) -> Self
    where
        G: Fn(&HeisenbergElement) -> [Complex64; 3] + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(grad));
        self
    }

    /// Drops an attached gradient so derivatives use finite differences.
    pub fn without_gradient(mut self) -> Self {
        self.gradient = None;
        self
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_fd_step(mut self, fd_step: f64) -> Self {
        self.fd_step = fd_step;
        self
    }

    pub fn value(&self, g: &HeisenbergElement) -> Complex64 {
        (self.eval)(g)
    }

    pub fn support(&self) -> SupportBox {
        self.support
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Evaluates on a 5×5 grid on each face pushed slightly outside the box.
    pub fn check_support(&self) -> Result<()> {
        let b = self.support;
        let eps = |(a, c): (f64, f64)| 1e-9 * (1.0 + a.abs().max(c.abs()));
        let grid = |(a, c): (f64, f64)| (0..5).map(move |i| a + (c - a) * i as f64 / 4.0);
        let mut samples = Vec::new();
        for u in grid(b.q) {
            for p in [b.p.0 - eps(b.p), b.p.1 + eps(b.p)] {
                for v in grid(b.t_range(p, u)) {
                    samples.push(HeisenbergElement::new(p, u, v));
                }
            }
        }
        for u in grid(b.p) {
            for q in [b.q.0 - eps(b.q), b.q.1 + eps(b.q)] {
                for v in grid(b.t_range(u, q)) {
                    samples.push(HeisenbergElement::new(u, q, v));
                }
            }
            for v in grid(b.q) {
                let t = b.t_range(u, v);
                samples.push(HeisenbergElement::new(u, v, t.0 - eps(t)));
                samples.push(HeisenbergElement::new(u, v, t.1 + eps(t)));
            }
        }
        for g in samples {
            let v = self.value(&g);
            if v != zero() {
                return Err(Error::Precondition(format!(
                    "test function is {v} at {g}, outside its declared support"
                )));
            }
        }
        Ok(())
    }

    /// `Σ w f(g) h(g)` over the tensor Gauss–Legendre rule on the support box.
    pub fn integrate_against<H: FnMut(&HeisenbergElement) -> Complex64>(&self, mut h: H) -> Complex64 {
        let gl = gauss_legendre(self.nodes);
        let b = self.support;
        let (rp, rq) = (gl.reseat(b.p.0, b.p.1), gl.reseat(b.q.0, b.q.1));
        let mut acc = CompensatedSum::<Complex64>::zero();
        for (&p, &wp) in rp.nodes.iter().zip(&rp.weights) {
            for (&q, &wq) in rq.nodes.iter().zip(&rq.weights) {
                let (t0, t1) = b.t_range(p, q);
                let rt = gl.reseat(t0, t1);
                for (&t, &wt) in rt.nodes.iter().zip(&rt.weights) {
                    let g = HeisenbergElement::new(p, q, t);
                    let v = self.value(&g);
                    if v != zero() {
                        acc.add(v * h(&g) * (wp * wq * wt));
                    }
                }
            }
        }
        acc.value()
    }

    pub fn integral(&self) -> Complex64 {
        self.integrate_against(|_| Complex64::new(1.0, 0.0))
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        let f = self.eval.clone();
        let mut out = self.derived(Arc::new(move |g| alpha * f(g)), self.support, format!("{alpha}·{}", self.label));
        out.gradient = self.gradient.clone().map(|gr| {
            let a: Arc<HGrad> = Arc::new(move |g: &HeisenbergElement| gr(g).map(|x| x * alpha));
            a
        });
        out
    }

    /// `α f + β g` supported on the union of the two boxes.
    pub fn linear_combination(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Self {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let mut out = self.derived(
            Arc::new(move |x| alpha * f(x) + beta * g(x)),
            self.support.union(&other.support),
            format!("{alpha}·{} + {beta}·{}", self.label, other.label),
        );
        out.nodes = self.nodes.max(other.nodes);
        out
    }

    /// `(L(h)f)(g) = f(h⁻¹g)`.
    pub fn left_translate(&self, h: &HeisenbergElement) -> Self {
        let f = self.eval.clone();
        let hi = h.inverse();
        self.derived(
            Arc::new(move |g| f(&group_mul(&hi, g))),
            self.support.left_image(h),
            format!("L({h}){}", self.label),
        )
    }

    /// `(R(h)f)(g) = f(g h)`.
    pub fn right_translate(&self, h: &HeisenbergElement) -> Self {
        let f = self.eval.clone();
        let hh = *h;
        self.derived(
            Arc::new(move |g| f(&group_mul(g, &hh))),
            self.support.right_image(&h.inverse()),
            format!("R({h}){}", self.label),
        )
    }

    /// `L(D)f` with `(L(X)f)(g) = d/ds f(exp(-sX) g)`.
    pub fn left_derive(&self, d: &UeaElement) -> Result<Self> {
        self.derive(d, Side::Left)
    }

    /// `R(D)f` with `(R(X)f)(g) = d/ds f(g exp(sX))`.
    pub fn right_derive(&self, d: &UeaElement) -> Result<Self> {
        self.derive(d, Side::Right)
    }

    fn derive(&self, d: &UeaElement, side: Side) -> Result<Self> {
        if *d.algebra().as_ref() != LieAlgebra::heisenberg() {
            return Err(Error::Unsupported("derivatives need the P, Q, Z basis".into()));
        }
        let mut parts: Vec<(Complex64, Arc<HFn>)> = Vec::new();
        for (alpha, c) in d.terms() {
            let mut f = self.clone();
            for &g in word_of(alpha).iter().rev() {
                f = f.derive_generator(GENERATORS[g], side);
            }
            parts.push((*c, f.eval));
        }
        let name = match side {
            Side::Left => "L",
            Side::Right => "R",
        };
        Ok(self.derived(
            Arc::new(move |g| {
                let mut acc = zero();
                for (c, f) in &parts {
                    acc += c * f(g);
                }
                acc
            }),
            self.support,
            format!("{name}({d}){}", self.label),
        ))
    }

    fn derive_generator(&self, gen: Generator, side: Side) -> Self {
        if let Some(grad) = self.gradient.clone() {
            // chain rule through the group law in exponential coordinates
            let eval: Arc<HFn> = Arc::new(move |g: &HeisenbergElement| {
                let [dp, dq, dt] = grad(g);
                match (side, gen) {
                    (Side::Right, Generator::P) => dp - dt * (0.5 * g.q),
                    (Side::Right, Generator::Q) => dq + dt * (0.5 * g.p),
                    (Side::Right, Generator::Z) => dt,
                    (Side::Left, Generator::P) => -dp - dt * (0.5 * g.q),
                    (Side::Left, Generator::Q) => -dq + dt * (0.5 * g.p),
                    (Side::Left, Generator::Z) => -dt,
                }
            });
            return self.derived(eval, self.support, String::new());
        }
        let f = self.eval.clone();
        let h = self.fd_step;
        let shift = move |g: &HeisenbergElement, s: f64| -> HeisenbergElement {
            let e = match gen {
                Generator::P => HeisenbergElement::new(s, 0.0, 0.0),
                Generator::Q => HeisenbergElement::new(0.0, s, 0.0),
                Generator::Z => HeisenbergElement::new(0.0, 0.0, s),
            };
            match side {
                Side::Right => group_mul(g, &e),
                Side::Left => group_mul(&e.inverse(), g),
            }
        };
        let eval: Arc<HFn> = Arc::new(move |g: &HeisenbergElement| {
            let central = |s: f64| (f(&shift(g, s)) - f(&shift(g, -s))) / (2.0 * s);
            (central(0.5 * h) * 4.0 - central(h)) / 3.0
        });
        self.derived(eval, self.support, String::new())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Gauss–Legendre size for an axis of the given width: `base` nodes plus
/// four per oscillation of `h_k(x + p)` and `e^{2πiqx}` across the axis.
fn axis_nodes(base: usize, width: f64, kmax: usize) -> usize {
    let cycles = width * ((2 * kmax + 1) as f64 / (2.0 * PI)).sqrt();
    base + (4.0 * cycles).ceil() as usize
}

/// `π(f)φ` truncated to `n` coefficients; `base` sets the resolution.
fn smooth_kernel(f: &HTestFunction, phi: &[Complex64], n: usize, base: usize, cfg: &SchrodingerConfig) -> Vec<Complex64> {
    let b = f.support();
    let kmax = n.max(phi.len());
    let rp = gauss_legendre(axis_nodes(base, b.p.1 - b.p.0, kmax)).reseat(b.p.0, b.p.1);
    let rq = gauss_legendre(axis_nodes(base, b.q.1 - b.q.0, kmax)).reseat(b.q.0, b.q.1);
    let gt = gauss_legendre(base + (4.0 * (b.t.1 - b.t.0)).ceil() as usize);
    // F(p, q) = ∫ f(p, q, t) e^{2πit} dt, since π(p,q,t) = e^{2πit} π(p,q,0)
    let mut big_f = vec![zero(); rp.len() * rq.len()];
    for (i, &p) in rp.nodes.iter().enumerate() {
        for (j, &q) in rq.nodes.iter().enumerate() {
            let mut acc = CompensatedSum::<Complex64>::zero();
            let (t0, t1) = b.t_range(p, q);
            let rt = gt.reseat(t0, t1);
            for (&t, &w) in rt.nodes.iter().zip(&rt.weights) {
                let v = f.value(&HeisenbergElement::new(p, q, t));
                if v != zero() {
                    acc.add(v * cis_turns(t) * w);
                }
            }
            big_f[i * rq.len() + j] = acc.value();
        }
    }
    let qmax = b.q.0.abs().max(b.q.1.abs());
    let rule = gauss_hermite_scaled(cfg.x_rule_size(phi.len(), n, qmax));
    let root = (2.0 * PI).sqrt();
    // phases e^{i√(2π) q y} for every (y, q) node pair
    let phases: Vec<Complex64> = rule
        .nodes
        .iter()
        .flat_map(|&y| rq.nodes.iter().map(move |&q| cis_turns(q * y / root)))
        .collect();

    let mut acc: Vec<CompensatedSum<Complex64>> = vec![CompensatedSum::zero(); n];
    let mut s = Scratch {
        out: Vec::new(),
        inner: Vec::new(),
    };
    for (i, (&p, &wp)) in rp.nodes.iter().zip(&rp.weights).enumerate() {
        let row = &big_f[i * rq.len()..(i + 1) * rq.len()];
        if row.iter().all(|v| *v == zero()) {
            continue;
        }
        for (a, (&y, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let mut g = CompensatedSum::<Complex64>::zero();
            for (j, (&fv, &wq)) in row.iter().zip(&rq.weights).enumerate() {
                g.add(fv * phases[a * rq.len() + j] * wq);
            }
            let g = g.value();
            if g == zero() {
                continue;
            }
            let x = -0.5 * p + y / root;
            fill_hermite_functions(x + p, phi.len(), &mut s.inner);
            let big_phi: Complex64 = phi.iter().zip(&s.inner).map(|(c, h)| c * h).sum();
            let c = g * big_phi * (wp * w / root);
            fill_hermite_functions(x, n, &mut s.out);
            for (o, &h) in acc.iter_mut().zip(&s.out) {
                o.add(c * h);
            }
        }
    }
    acc.into_iter().map(|a| a.value()).collect()
}

/// `π(f)φ = ∫ f(g) π(g)φ dg`, first `n` coefficients, tagged rapid-decay.
///
/// The integral is computed twice, with `3/4` of the Gauss–Legendre nodes and
/// half the extra input coefficients in the coarse pass; disagreement beyond
/// `smooth_tol · (1 + max|c_k|)` is an accuracy error.
pub fn smooth_by(f: &HTestFunction, phi: &HermiteVector, n: usize, cfg: &SchrodingerConfig) -> Result<HermiteVector> {
    let fine_in = input_window(phi, n, cfg.inner_extra)?;
    let coarse_in = input_window(phi, n, cfg.inner_extra / 2)?;
    let fine = smooth_kernel(f, &fine_in, n, f.nodes(), cfg);
    let coarse = smooth_kernel(f, &coarse_in, n, (3 * f.nodes()).div_ceil(4).max(2), cfg);
    let (k, diff) = max_diff(&fine, &coarse);
    let scale = 1.0 + fine.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if diff > cfg.smooth_tol * scale {
        return Err(Error::Accuracy {
            coarse: coarse[k],
            fine: fine[k],
            tolerance: cfg.smooth_tol * scale,
        });
    }
    HermiteVector::finite(fine)
}

/// `⟨π(f)φ, ψ⟩`: smooth `φ`, then pair with `ψ`.
pub fn gmc_eval(phi: &HermiteVector, psi: &HermiteVector, f: &HTestFunction, cfg: &SchrodingerConfig) -> Result<Complex64> {
    let smoothed = smooth_by(f, phi, cfg.truncation, cfg)?;
    pair(smoothed.vector(), psi.vector())
}

/// `⟨π(p,q,0)φ, ψ⟩` for rapid-decay `ψ`, computed as `⟨φ, π(-p,q,0)ψ⟩`.
/// A finite `φ` is paired exactly; otherwise the truncation is doubled until
/// two successive values agree.
pub fn fourier_wigner(phi: &HermiteVector, psi: &HermiteVector, p: f64, q: f64, cfg: &SchrodingerConfig) -> Result<Complex64> {
    if psi.class() != GrowthClass::RapidDecay {
        return Err(Error::Precondition(format!(
            "the pointwise coefficient needs a rapid-decay right argument, got {}",
            psi.class()
        )));
    }
    let transposed = HeisenbergElement::new(-p, q, 0.0);
    let finite_end = if psi.vector().has_zero_tail() {
        psi.vector().end() as usize
    } else {
        0
    };
    let value_at = |j: usize| -> Result<Complex64> {
        let w = act_group(&transposed, psi, j, cfg)?;
        let mut acc = CompensatedSum::<Complex64>::zero();
        for k in 0..j {
            acc.add(phi.coeff(k) * w.coeff(k));
        }
        Ok(acc.value())
    };
    if phi.vector().has_zero_tail() {
        return value_at((phi.vector().end().max(1) as usize).max(finite_end));
    }
    let mut j = finite_end.max(32);
    let mut prev = value_at(j)?;
    let mut achieved = f64::INFINITY;
    while 2 * j <= cfg.max_truncation {
        j *= 2;
        let cur = value_at(j)?;
        achieved = (cur - prev).norm();
        if achieved <= cfg.pair_tol * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Budget {
        terms: j,
        achieved,
        tolerance: cfg.pair_tol,
    })
}

/// Outcome of the rapid-decay probe on a smoothed vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCertificate {
    pub required: f64,
    pub truncations: [usize; 2],
    /// Fitted exponents on the upper half of each truncation; infinite when
    /// the window is below the noise floor.
    pub exponents: [f64; 2],
    pub passed: bool,
}

/// Relative level below which coefficients count as numerically zero.
const NOISE_FLOOR: f64 = 1e-13;

/// Fitted decay exponent of `c` on `n/2..n`: least-squares slope of
/// `-log M_k` against `log(1+k)`, where `M_k = max_{k≤j<n} |c_j|` is the upper
/// envelope of the tail. Entries below the noise floor are ignored; a tail
/// entirely below it gives `+∞`.
pub fn tail_exponent(c: &HermiteVector, n: usize) -> f64 {
    let mags: Vec<f64> = c.coeffs(n).iter().map(|x| x.norm()).collect();
    let top = mags.iter().cloned().fold(0.0, f64::max);
    let floor = NOISE_FLOOR * top;
    let mut envelope = vec![0.0; n];
    let mut running: f64 = 0.0;
    for k in (0..n).rev() {
        running = running.max(mags[k]);
        envelope[k] = running;
    }
    let pts: Vec<(f64, f64)> = (n / 2..n)
        .filter(|&k| envelope[k] > floor)
        .map(|k| ((1.0 + k as f64).ln(), -envelope[k].ln()))
        .collect();
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        f64::INFINITY
    }
}

/// Smooths `φ` at truncations `n1` and `n2` and requires the fitted tail
/// exponent to exceed `r` at both.
pub fn rapid_decay_certificate(
    f: &HTestFunction,
    phi: &HermiteVector,
    r: f64,
    n1: usize,
    n2: usize,
    cfg: &SchrodingerConfig,
) -> Result<DecayCertificate> {
    let a = smooth_by(f, phi, n1, cfg)?;
    let b = smooth_by(f, phi, n2, cfg)?;
    let exponents = [tail_exponent(&a, n1), tail_exponent(&b, n2)];
    Ok(DecayCertificate {
        required: r,
        truncations: [n1, n2],
        exponents,
        passed: exponents.iter().all(|&e| e > r),
    })
}

/// For each `ζ`, the first probe `f` with `|⟨π(f)η, ζ⟩| > threshold`, with
/// the witnessed modulus.
pub fn injectivity_probe(
    eta: &HermiteVector,
    zetas: &[HermiteVector],
    probes: &[HTestFunction],
    threshold: f64,
    cfg: &SchrodingerConfig,
) -> Result<Vec<Option<(usize, f64)>>> {
    let mut found: Vec<Option<(usize, f64)>> = vec![None; zetas.len()];
    for (i, f) in probes.iter().enumerate() {
        if found.iter().all(|x| x.is_some()) {
            break;
        }
        let smoothed = smooth_by(f, eta, cfg.truncation, cfg)?;
        for (slot, zeta) in found.iter_mut().zip(zetas) {
            if slot.is_none() {
                let v = pair(smoothed.vector(), zeta.vector())?.norm();
                if v > threshold {
                    *slot = Some((i, v));
                }
            }
        }
    }
    Ok(found)
}

/// The Heisenberg group with its Schrödinger representation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Schrodinger {
    pub config: SchrodingerConfig,
}

impl Schrodinger {
    pub fn new(config: SchrodingerConfig) -> Self {
        Self { config }
    }
}

impl GroupModel for Schrodinger {
    type Element = HeisenbergElement;

    fn dimension(&self) -> usize {
        3
    }

    fn identity(&self) -> HeisenbergElement {
        HeisenbergElement::IDENTITY
    }

    fn mul(&self, g: &HeisenbergElement, h: &HeisenbergElement) -> HeisenbergElement {
        group_mul(g, h)
    }

    fn inverse(&self, g: &HeisenbergElement) -> HeisenbergElement {
        g.inverse()
    }

    /// Exponential coordinates: `exp(pP + qQ + tZ) = (p, q, t)`.
    fn exp(&self, x: &[f64]) -> HeisenbergElement {
        HeisenbergElement::new(x[0], x[1], x[2])
    }

    fn coordinates(&self, g: &HeisenbergElement) -> Vec<f64> {
        vec![g.p, g.q, g.t]
    }

    fn lie_algebra(&self) -> Arc<LieAlgebra> {
        Arc::new(LieAlgebra::heisenberg())
    }

    fn haar_quadrature(&self, region: &[(f64, f64)], nodes: usize) -> HaarRule<HeisenbergElement> {
        let gl = gauss_legendre(nodes);
        let r: Vec<Rule> = region.iter().map(|&(a, b)| gl.reseat(a, b)).collect();
        let mut out = Vec::with_capacity(nodes * nodes * nodes);
        for (&p, &wp) in r[0].nodes.iter().zip(&r[0].weights) {
            for (&q, &wq) in r[1].nodes.iter().zip(&r[1].weights) {
                for (&t, &wt) in r[2].nodes.iter().zip(&r[2].weights) {
                    out.push((HeisenbergElement::new(p, q, t), wp * wq * wt));
                }
            }
        }
        out
    }

    /// `φ = π(E^m)u` with the oscillator element `E = 1/2 - (P² + Q²)/(4π)`,
    /// which acts on `e_k` as `k + 1`, and `u_k = φ_k / (k+1)^m`.
    fn factorize_distribution(&self, phi: &CoefficientVector) -> Result<(UeaElement, CoefficientVector)> {
        let (d, u) = factorize_oscillator(&HermiteVector::new(phi.clone())?)?;
        Ok((d, u.into_vector()))
    }
}

/// `E = 1/2 - (P² + Q²)/(4π)`; `π(E) e_k = (k + 1) e_k`.
pub fn oscillator_element() -> UeaElement {
    let alg = Arc::new(LieAlgebra::heisenberg());
    let half = UeaElement::scalar(&alg, Complex64::new(0.5, 0.0));
    let c = Complex64::new(-1.0 / (4.0 * PI), 0.0);
    let p2 = UeaElement::monomial(&alg, vec![2, 0, 0], c).unwrap();
    let q2 = UeaElement::monomial(&alg, vec![0, 2, 0], c).unwrap();
    half.add(&p2).unwrap().add(&q2).unwrap()
}

/// Writes a polynomial-growth `φ` with envelope degree `r` as `π(E^m)u`,
/// `m` the least integer above `r + 1/2`, so `u` is square-summable.
pub fn factorize_oscillator(phi: &HermiteVector) -> Result<(UeaElement, HermiteVector)> {
    let v = phi.vector();
    let alg = Arc::new(LieAlgebra::heisenberg());
    if v.class() != GrowthClass::PolynomialGrowth {
        return Ok((UeaElement::one(&alg), phi.clone()));
    }
    let r = v.envelope().degree();
    let m = (r + 0.5).floor() + 1.0;
    if m <= 0.0 {
        return Ok((UeaElement::one(&alg), HermiteVector(v.clone().with_class(GrowthClass::SquareSummable))));
    }
    let m = m as i32;
    let env = GrowthEnvelope::new(v.envelope().constant(), r - m as f64)?;
    let u = v.map_indexed(move |k, c| c / (1.0 + k as f64).powi(m), env, GrowthClass::SquareSummable);
    Ok((oscillator_element().pow(m as u32), HermiteVector(u)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_functions;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn gens() -> (UeaElement, UeaElement, UeaElement) {
        let alg = Arc::new(LieAlgebra::heisenberg());
        (
            UeaElement::generator(&alg, 0).unwrap(),
            UeaElement::generator(&alg, 1).unwrap(),
            UeaElement::generator(&alg, 2).unwrap(),
        )
    }

    #[test]
    fn group_law_examples() {
        let g = group_mul(&HeisenbergElement::new(1.0, 0.0, 0.0), &HeisenbergElement::new(0.0, 1.0, 0.0));
        assert_eq!(g, HeisenbergElement::new(1.0, 1.0, 0.5));
        let h = HeisenbergElement::new(0.3, -0.7, 1.1);
        assert_eq!(group_mul(&h, &h.inverse()), HeisenbergElement::IDENTITY);
        assert_eq!(group_mul(&h, &HeisenbergElement::IDENTITY), h);
    }

    #[test]
    fn matrix_element_examples() {
        let cfg = SchrodingerConfig::default();
        let v = matrix_element(&HeisenbergElement::central(0.25), 2, 2, &cfg).unwrap();
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let v = matrix_element(&HeisenbergElement::new(1.0, 0.0, 0.0), 0, 0, &cfg).unwrap();
        assert!((v - c((-PI / 2.0).exp())).norm() < 1e-12, "{v}");
        let v = matrix_element(&HeisenbergElement::IDENTITY, 0, 1, &cfg).unwrap();
        assert!(v.norm() < 1e-13);
    }

    #[test]
    fn ladder_examples() {
        let (p, q, z) = gens();
        let e0 = HermiteVector::basis(0);
        let out = act_algebra(&p, &e0).unwrap();
        assert!((out.coeff(1) + c(PI.sqrt())).norm() < 1e-15);
        assert_eq!(out.coeff(0), c(0.0));
        let phi = HermiteVector::finite(vec![c(0.3), Complex64::new(0.1, -0.2), c(-1.0)]).unwrap();
        let zphi = act_algebra(&z, &phi).unwrap();
        for k in 0..3 {
            assert!((zphi.coeff(k) - phi.coeff(k) * Complex64::new(0.0, 2.0 * PI)).norm() < 1e-15);
        }
        let pq = act_algebra(&p, &act_algebra(&q, &phi).unwrap()).unwrap();
        let qp = act_algebra(&q, &act_algebra(&p, &phi).unwrap()).unwrap();
        for k in 0..6 {
            assert!((pq.coeff(k) - qp.coeff(k) - zphi.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn ladder_matches_derivative_quadrature() {
        // h_0' projected on h_1 by quadrature equals -√π
        let rule = gauss_hermite_scaled(60);
        let root = (2.0 * PI).sqrt();
        let mut acc = 0.0;
        for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
            let x = y / root;
            let h = hermite_functions(x, 2);
            let dh0 = -2.0 * PI * x * h[0];
            acc += w / root * dh0 * h[1];
        }
        assert!((acc + PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tail_action_uses_windows() {
        let (p, _, _) = gens();
        let g = HermiteVector::gauss();
        let out = act_algebra(&p, &g).unwrap();
        let sp = PI.sqrt();
        for k in [0usize, 1, 5, 40, 41, 90] {
            let kf = k as f64;
            let up = if k == 0 { c(0.0) } else { g.coeff(k - 1) * kf.sqrt() };
            let expect = (g.coeff(k + 1) * (kf + 1.0).sqrt() - up) * sp;
            assert!((out.coeff(k) - expect).norm() < 1e-15, "{k}");
        }
        out.vector().check_envelope(0, 400).unwrap();
    }

    #[test]
    fn dilated_gaussian_matches_quadrature() {
        let g = HermiteVector::gauss();
        let rule = gauss_hermite_scaled(100);
        let root = (2.0 * PI).sqrt();
        for k in [0usize, 2, 4, 10] {
            let mut acc = 0.0;
            for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
                let x = y / root;
                let f = (-PI * x * x / 2.0).exp();
                acc += w / root * f * hermite_functions(x, k + 1)[k];
            }
            assert!((g.coeff(k).re - acc).abs() < 1e-12, "{k}");
        }
        assert!((g.partial_norm(200) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_coefficients() {
        let d = dirac_delta();
        assert_eq!(d.coeff(1), c(0.0));
        assert!((d.coeff(0).re - 2.0f64.powf(0.25)).abs() < 1e-15);
        assert_eq!(d.class(), GrowthClass::PolynomialGrowth);
    }

    #[test]
    fn central_element_acts_by_phase() {
        let cfg = SchrodingerConfig::default();
        let phi = HermiteVector::finite(vec![c(0.5), c(-0.25), Complex64::new(0.0, 0.75)]).unwrap();
        let out = act_group(&HeisenbergElement::central(0.1), &phi, 8, &cfg).unwrap();
        let ph = cis_turns(0.1);
        for k in 0..8 {
            assert!((out.coeff(k) - ph * phi.coeff(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn act_group_truncation() {
        let cfg = SchrodingerConfig::default();
        let phi = HermiteVector::basis(10);
        assert!(matches!(act_group(&HeisenbergElement::IDENTITY, &phi, 0, &cfg), Err(Error::Precondition(_))));
        assert!(matches!(act_group(&HeisenbergElement::IDENTITY, &phi, 10, &cfg), Err(Error::Precondition(_))));
        let out = act_group(&HeisenbergElement::central(0.5), &phi, 12, &cfg).unwrap();
        assert!((out.coeff(10) + Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn support_boxes_follow_translations() {
        let f = SchrodingerConfig::default().bump3(HeisenbergElement::IDENTITY, 0.3, 1.0).unwrap();
        let h = HeisenbergElement::new(0.5, -0.2, 0.1);
        f.left_translate(&h).check_support().unwrap();
        f.right_translate(&h).check_support().unwrap();
        assert!(HTestFunction::new(|_| c(1.0), f.support(), 8, 1e-3).is_err());
    }

    #[test]
    fn analytic_and_finite_difference_derivatives_agree() {
        let (p, q, z) = gens();
        let f = SchrodingerConfig::default()
            .bump3(HeisenbergElement::new(0.1, -0.05, 0.02), 0.4, 1.0)
            .unwrap();
        let fd = f.clone().without_gradient();
        let g = HeisenbergElement::new(0.2, 0.05, -0.1);
        for d in [&p, &q, &z] {
            for (a, b) in [
                (f.left_derive(d).unwrap(), fd.left_derive(d).unwrap()),
                (f.right_derive(d).unwrap(), fd.right_derive(d).unwrap()),
            ] {
                let (x, y) = (a.value(&g), b.value(&g));
                assert!((x - y).norm() < 1e-6 * (1.0 + x.norm()), "{x} {y}");
            }
        }
    }

    #[test]
    fn oscillator_element_counts_levels() {
        let e = oscillator_element();
        for k in 0..6 {
            let out = act_algebra(&e, &HermiteVector::basis(k)).unwrap();
            for j in 0..k + 4 {
                let expect = if j == k { (k + 1) as f64 } else { 0.0 };
                assert!((out.coeff(j) - c(expect)).norm() < 1e-12, "{k} {j}");
            }
        }
    }

    #[test]
    fn oscillator_factorization_round_trip() {
        let d = dirac_delta();
        let (e, u) = factorize_oscillator(&d).unwrap();
        assert_eq!(u.class(), GrowthClass::SquareSummable);
        let back = act_algebra(&e, &u).unwrap();
        for k in 0..60 {
            let want = d.coeff(k);
            assert!((back.coeff(k) - want).norm() <= 1e-12 * want.norm().max(1e-300) + 1e-15, "{k}");
        }
    }
}
