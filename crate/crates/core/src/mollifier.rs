//! Approximate identities: the bump profile `j`, its dilates
//! `j_n(x) = n^d j(nx)` and their push-forwards `J_n` to the group.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::heisenberg::{HTestFunction, HeisenbergElement, SchrodingerConfig};
use crate::quadrature::{gauss_legendre, tanh_sinh, CompensatedSum};
use crate::torus::TorusTestFunction;

/// Coefficients of the torus push-forward below this modulus are dropped.
pub const BAND_CUTOFF: f64 = 1e-14;

fn standard_bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

/// `∫_{-1}^{1} e^{-1/(1-x²)} dx`.
pub fn standard_bump_integral() -> f64 {
    tanh_sinh(standard_bump, -1.0, 1.0, 1e-15, 12).0
}

/// `x ↦ c e^{-1/(1-(x/ρ)²)}` on `|x| < ρ` with unit integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    radius: f64,
    normalization: f64,
}

impl BumpProfile {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Precondition(format!("bump radius must be positive, got {radius}")));
        }
        Ok(Self {
            radius,
            normalization: 1.0 / (radius * standard_bump_integral()),
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn value(&self, x: f64) -> f64 {
        self.normalization * standard_bump(x / self.radius)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let u = x / self.radius;
        if u.abs() >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - u * u;
        -self.value(x) * 2.0 * u / (s * s * self.radius)
    }

    /// `∫ profile` by tanh–sinh, with the difference between the last two levels.
    pub fn mass(&self) -> (f64, f64) {
        tanh_sinh(|x| self.value(x), -self.radius, self.radius, 1e-15, 12)
    }
}

/// `j_n(x) = n^d Π_i j(n x_i)` on `d` axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBump {
    profile: BumpProfile,
    n: u32,
    dim: usize,
}

/// The dilate `j_n` of `profile` on `dim` axes.
pub fn make_jn(profile: BumpProfile, n: u32, dim: usize) -> Result<ScaledBump> {
    if n == 0 || dim == 0 {
        return Err(Error::Precondition(format!("need n >= 1 and dim >= 1, got n = {n}, dim = {dim}")));
    }
    Ok(ScaledBump { profile, n, dim })
}

impl ScaledBump {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn profile(&self) -> BumpProfile {
        self.profile
    }

    /// Support half-width per axis, `ρ/n`.
    pub fn radius(&self) -> f64 {
        self.profile.radius / self.n as f64
    }

    /// The one-axis factor `n j(nx)`.
    pub fn axis(&self) -> BumpProfile {
        BumpProfile::new(self.radius()).expect("positive radius")
    }

    pub fn axis_value(&self, x: f64) -> f64 {
        self.n as f64 * self.profile.value(self.n as f64 * x)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|&xi| self.axis_value(xi)).product()
    }

    /// `(∫ j_n, |difference between two quadrature levels|)`; the product
    /// structure makes the integral the `d`-th power of the axis integral.
    pub fn mass(&self) -> (f64, f64) {
        let r = self.radius();
        let (m, diff) = tanh_sinh(|x| self.axis_value(x), -r, r, 1e-15, 12);
        (m.powi(self.dim as i32), diff * self.dim as f64)
    }
}

/// Models that can carry `j_n` to a test function through `exp`.
pub trait PushForward {
    type TestFunction;

    fn push_forward(&self, jn: &ScaledBump) -> Result<Self::TestFunction>;
}

/// Cosine transform `S(ξ) = ∫_0^1 e^{-1/(1-u²)} cos(2πξu) du` on a fixed composite rule.
#[derive(Debug, Clone)]
struct CosineTransform {
    nodes: Vec<f64>,
    weighted: Vec<f64>,
}

impl CosineTransform {
    const PANELS: usize = 128;

    fn new() -> Self {
        let gl = gauss_legendre(20);
        let mut nodes = Vec::with_capacity(Self::PANELS * gl.len());
        let mut weighted = Vec::with_capacity(Self::PANELS * gl.len());
        let h = 1.0 / Self::PANELS as f64;
        for p in 0..Self::PANELS {
            let r = gl.reseat(p as f64 * h, (p + 1) as f64 * h);
            for (&u, &w) in r.nodes.iter().zip(&r.weights) {
                nodes.push(u);
                weighted.push(w * standard_bump(u));
            }
        }
        Self { nodes, weighted }
    }

    fn at(&self, xi: f64) -> f64 {
        let mut acc = CompensatedSum::<f64>::new();
        for (&u, &w) in self.nodes.iter().zip(&self.weighted) {
            acc.add(w * (2.0 * PI * xi * u).cos());
        }
        acc.value()
    }

    /// `S(mh)` for `m = 0..=count` by rotating phasors, reseeded every 64 steps.
    fn ladder(&self, h: f64, count: usize) -> Vec<f64> {
        let steps: Vec<Complex64> = self.nodes.iter().map(|&u| Complex64::from_polar(1.0, 2.0 * PI * h * u)).collect();
        let mut phasors = vec_ones(self.nodes.len());
        let mut out = Vec::with_capacity(count + 1);
        for m in 0..=count {
            if m % 64 == 0 {
                for (z, &u) in phasors.iter_mut().zip(&self.nodes) {
                    *z = Complex64::from_polar(1.0, 2.0 * PI * h * m as f64 * u);
                }
            }
            let mut acc = CompensatedSum::<f64>::new();
            for (z, &w) in phasors.iter().zip(&self.weighted) {
                acc.add(w * z.re);
            }
            out.push(acc.value());
            for (z, s) in phasors.iter_mut().zip(&steps) {
                *z *= s;
            }
        }
        out
    }
}

fn vec_ones(n: usize) -> Vec<Complex64> {
    alloc::vec![Complex64::new(1.0, 0.0); n]
}

/// A `χ` beyond which `|S| < BAND_CUTOFF · S(0)`, from a grid of step 1/4 up to 400.
fn standard_bandwidth(ct: &CosineTransform) -> f64 {
    let s0 = ct.at(0.0);
    let h = 0.25;
    let values = ct.ladder(h, 1600);
    let last = values.iter().rposition(|v| v.abs() >= BAND_CUTOFF * s0).unwrap_or(0);
    (last + 2) as f64 * h
}

/// Torus push-forward: `f̂(m) = ∫ j_n(x) e^{-2πimx} dx = ĵ(m/n)`, with
/// `f̂(0) = 1` exactly and the band cut where `|f̂| < 10⁻¹⁴`.
pub fn torus_push_forward(jn: &ScaledBump) -> Result<TorusTestFunction> {
    if jn.dim() != 1 {
        return Err(Error::Precondition(format!("the torus is 1-dimensional, got a {}-dimensional bump", jn.dim())));
    }
    let support = jn.radius();
    if support >= 0.5 {
        return Err(Error::InjectivityRadius {
            support,
            required_n: (2.0 * jn.profile().radius()).floor() as u32 + 1,
        });
    }
    let ct = CosineTransform::new();
    // ĵ(m/n) = S(mρ/n) / S(0) for the radius-ρ profile
    let h = support;
    let band = (standard_bandwidth(&ct) / h).ceil() as usize;
    let s = ct.ladder(h, band);
    let s0 = s[0];
    let last = s.iter().rposition(|v| v.abs() >= BAND_CUTOFF * s0).unwrap_or(0);
    let hat: Vec<f64> = s[..=last].iter().map(|v| v / s0).collect();
    Ok(TorusTestFunction::from_fn(last, |m| {
        if m == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(hat[m.unsigned_abs() as usize], 0.0)
        }
    }))
}

/// Heisenberg push-forward: `exp` is the identity in exponential coordinates
/// with unit Jacobian, so `J_n` is the product bump itself.
pub fn heisenberg_push_forward(jn: &ScaledBump, cfg: &SchrodingerConfig) -> Result<HTestFunction> {
    if jn.dim() != 3 {
        return Err(Error::Precondition(format!("the Heisenberg group is 3-dimensional, got a {}-dimensional bump", jn.dim())));
    }
    cfg.bump3(HeisenbergElement::IDENTITY, jn.radius(), 1.0)
}

impl PushForward for crate::torus::Torus {
    type TestFunction = TorusTestFunction;

    fn push_forward(&self, jn: &ScaledBump) -> Result<TorusTestFunction> {
        torus_push_forward(jn)
    }
}

impl PushForward for crate::heisenberg::Schrodinger {
    type TestFunction = HTestFunction;

    fn push_forward(&self, jn: &ScaledBump) -> Result<HTestFunction> {
        heisenberg_push_forward(jn, &self.config)
    }
}

/// `π(J_n)η` for a model with a smoothing operator.
pub fn mollify<M>(model: &M, eta: &M::Vector, n: u32, profile: BumpProfile) -> Result<M::Vector>
where
    M: crate::gmc::GmcModel + PushForward<TestFunction = <M as crate::gmc::GmcModel>::TestFunction>,
{
    let jn = make_jn(profile, n, model.dimension())?;
    let f = model.push_forward(&jn)?;
    model.smooth(&f, eta)
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxRow {
    pub n: u32,
    pub value: Complex64,
    pub residual: f64,
}

/// `|⟨π(f)π(J_n)η, ζ⟩ - ⟨π(f)η, ζ⟩|` for each `n`.
pub fn gmc_approx<M>(
    model: &M,
    eta: &M::Vector,
    zeta: &M::Vector,
    f: &<M as crate::gmc::GmcModel>::TestFunction,
    ns: &[u32],
    profile: BumpProfile,
) -> Result<Vec<ApproxRow>>
where
    M: crate::gmc::GmcModel + PushForward<TestFunction = <M as crate::gmc::GmcModel>::TestFunction>,
{
    let limit = model.gmc_eval(eta, zeta, f)?;
    ns.iter()
        .map(|&n| {
            let smooth = mollify(model, eta, n, profile)?;
            let value = model.gmc_eval(&smooth, zeta, f)?;
            Ok(ApproxRow {
                n,
                value,
                residual: (value - limit).norm(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{Torus, TorusSequence};

    #[test]
    fn standard_integral_value() {
        assert!((standard_bump_integral() - 0.443_993_8).abs() < 1e-7);
    }

    #[test]
    fn scaled_masses() {
        let p = BumpProfile::new(0.3).unwrap();
        for n in [1, 2, 4, 8] {
            for dim in [1, 3] {
                let jn = make_jn(p, n, dim).unwrap();
                let (m, diff) = jn.mass();
                assert!((m - 1.0).abs() < 1e-10 && diff < 1e-10, "{n} {dim} {m}");
            }
        }
        let j4 = make_jn(p, 4, 1).unwrap();
        assert_eq!(j4.radius(), 0.075);
        assert!((j4.value(&[0.0]) - 4.0 * p.value(0.0)).abs() < 1e-12);
        assert_eq!(j4.value(&[0.076]), 0.0);
    }

    #[test]
    fn profile_derivative_matches_difference() {
        let p = BumpProfile::new(0.5).unwrap();
        for x in [-0.4, -0.1, 0.2, 0.45] {
            let h = 1e-5;
            let fd = (p.value(x + h) - p.value(x - h)) / (2.0 * h);
            assert!((fd - p.derivative(x)).abs() < 1e-6 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn torus_push_forward_matches_direct_quadrature() {
        let p = BumpProfile::new(0.2).unwrap();
        let f = torus_push_forward(&make_jn(p, 2, 1).unwrap()).unwrap();
        assert_eq!(f.hat(0), Complex64::new(1.0, 0.0));
        for m in [1i64, 3, 17] {
            let (direct, _) = tanh_sinh(|x| p.value(x) * (2.0 * PI * m as f64 * x / 2.0).cos(), -0.2, 0.2, 1e-15, 12);
            assert!((f.hat(m).re - direct).abs() < 1e-13, "{m}");
            assert_eq!(f.hat(m), f.hat(-m));
        }
        assert!(f.hat(f.bandwidth() as i64).norm() >= BAND_CUTOFF);
    }

    #[test]
    fn torus_coefficients_approach_one() {
        let p = BumpProfile::new(0.2).unwrap();
        let vals: Vec<f64> = [1, 2, 4, 8, 16]
            .iter()
            .map(|&n| torus_push_forward(&make_jn(p, n, 1).unwrap()).unwrap().hat(3).re)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]) && (1.0 - vals[4]) < 1e-2, "{vals:?}");
    }

    #[test]
    fn injectivity_radius() {
        let p = BumpProfile::new(1.3).unwrap();
        match torus_push_forward(&make_jn(p, 2, 1).unwrap()) {
            Err(Error::InjectivityRadius { required_n, .. }) => assert_eq!(required_n, 3),
            other => panic!("{other:?}"),
        }
        assert!(torus_push_forward(&make_jn(p, 3, 1).unwrap()).is_ok());
    }

    #[test]
    fn mollified_comb_is_the_transform() {
        let p = BumpProfile::new(0.2).unwrap();
        let out = mollify(&Torus, &TorusSequence::comb(), 4, p).unwrap();
        let f = torus_push_forward(&make_jn(p, 4, 1).unwrap()).unwrap();
        for m in [-5i64, 0, 2, 40] {
            assert_eq!(out.coeff(m), f.hat(m));
        }
    }

    #[test]
    fn heisenberg_push_forward_peak() {
        let p = BumpProfile::new(0.5).unwrap();
        let jn = make_jn(p, 4, 3).unwrap();
        let f = heisenberg_push_forward(&jn, &SchrodingerConfig::default()).unwrap();
        let peak = jn.axis_value(0.0).powi(3);
        assert!((f.value(&HeisenbergElement::IDENTITY).re - peak).abs() < 1e-12 * peak);
    }
}
