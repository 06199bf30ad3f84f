//! Quadrature rules and compensated summation.
//!
//! Gauss–Legendre rules integrate test functions over their support boxes,
//! Gauss–Hermite rules carry the `x`-space integrals of the Schrödinger model,
//! and a double-exponential (tanh–sinh) rule integrates bump profiles whose
//! derivatives all vanish at the endpoints.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Neumaier-compensated running sum.
///
/// Summation order is the call order, so a fixed iteration order gives
/// bit-reproducible results.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl CompensatedSum<f64> {
    pub fn new() -> Self {
        Self { sum: 0.0, carry: 0.0 }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl CompensatedSum<Complex64> {
    pub fn zero() -> Self {
        Self {
            sum: Complex64::new(0.0, 0.0),
            carry: Complex64::new(0.0, 0.0),
        }
    }

    pub fn add(&mut self, x: Complex64) {
        let (re, cre) = two_sum_step(self.sum.re, self.carry.re, x.re);
        let (im, cim) = two_sum_step(self.sum.im, self.carry.im, x.im);
        self.sum = Complex64::new(re, im);
        self.carry = Complex64::new(cre, cim);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn two_sum_step(sum: f64, carry: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        carry + ((sum - t) + x)
    } else {
        carry + ((x - t) + sum)
    };
    (t, c)
}

/// Sums complex terms in iteration order with compensation.
pub fn compensated_sum<I: IntoIterator<Item = Complex64>>(terms: I) -> Complex64 {
    let mut acc = CompensatedSum::<Complex64>::zero();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

/// A one-dimensional quadrature rule `∫ f ≈ Σ w_i f(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Affine map of a rule on `[-1, 1]` onto `[a, b]`.
    pub fn reseat(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }

    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        T: Copy + Add<Output = T> + Sub<Output = T> + core::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64) -> T,
    {
        let mut acc = T::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(x) * w;
        }
        acc
    }
}

/// Gauss–Legendre rule with `n` nodes on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Hermite rule with `n` nodes for the weight `e^{-y²}` on the real line,
/// nodes ascending.
///
/// Nodes are the eigenvalues of the Jacobi matrix, polished by Newton steps on
/// the orthonormal recurrence, which also yields the weights. Outer weights
/// underflow to zero for large `n`; use [`gauss_hermite_scaled`] when the
/// integrand carries its own Gaussian factor.
pub fn gauss_hermite(n: usize) -> Rule {
    let mut rule = gauss_hermite_scaled(n);
    for (w, &y) in rule.weights.iter_mut().zip(&rule.nodes) {
        *w *= (-y * y).exp();
    }
    rule
}

/// The Gauss–Hermite rule with weights `w_i e^{y_i²}`, for integrands given as
/// `g(y)` rather than `e^{-y²} g(y)`.
///
/// The recurrence carries its Gaussian factor as a separate logarithm, so the
/// scaled weights stay finite for every `n`.
pub fn gauss_hermite_scaled(n: usize) -> Rule {
    let mut diag = alloc::vec![0.0; n];
    let mut off: Vec<f64> = (0..n).map(|j| if j + 1 < n { ((j + 1) as f64 / 2.0).sqrt() } else { 0.0 }).collect();
    tridiagonal_eigenvalues(&mut diag, &mut off);
    diag.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    for i in n / 2..n {
        let mut z = diag[i];
        let mut log_w = 0.0;
        for step in 0..3 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            let mut log_scale = -0.5 * z * z;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
                if p1.abs() > 1e150 {
                    p1 *= 1e-150;
                    p2 *= 1e-150;
                    log_scale += 150.0 * core::f64::consts::LN_10;
                }
            }
            let pp = (2.0 * nf).sqrt() * p2;
            log_w = core::f64::consts::LN_2 - 2.0 * (pp.abs().ln() + log_scale);
            if step < 2 {
                z -= p1 / pp;
            }
        }
        if n % 2 == 1 && i == n / 2 {
            z = 0.0;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = log_w.exp();
        weights[n - 1 - i] = weights[i];
    }
    Rule { nodes, weights }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[0..n-1]` (implicit QL); `d` is overwritten with them.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Double-exponential (tanh–sinh) integration of `f` over `[a, b]`.
///
/// Halves the step until two successive levels agree to `tol` (absolute), up to
/// `max_levels` halvings. Returns the finest estimate and the last difference.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64, max_levels: u32) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let t_max = 3.5;
    let mut eval = |h: f64| -> f64 {
        let mut acc = CompensatedSum::<f64>::new();
        let steps = (t_max / h).ceil() as i64;
        for k in -steps..=steps {
            let t = k as f64 * h;
            let u = 0.5 * PI * t.sinh();
            let ch = u.cosh();
            let x = u.tanh();
            let w = 0.5 * PI * t.cosh() / (ch * ch);
            if w == 0.0 || x.abs() >= 1.0 {
                continue;
            }
            acc.add(w * f(mid + half * x));
        }
        acc.value() * h * half
    };
    let mut h = 0.5;
    let mut prev = eval(h);
    let mut diff = f64::INFINITY;
    for _ in 0..max_levels {
        h *= 0.5;
        let cur = eval(h);
        diff = (cur - prev).abs();
        prev = cur;
        if diff < tol {
            break;
        }
    }
    (prev, diff)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(10);
        // ∫_{-1}^{1} x^18 dx = 2/19
        let v: f64 = rule.integrate(|x| x.powi(18));
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        let s: f64 = rule.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let r = rule.reseat(0.0, 3.0);
        let v: f64 = r.integrate(|x| x * x);
        assert!((v - 9.0).abs() < 1e-12);
    }

    #[test]
    fn legendre_odd_order_has_center_node() {
        let rule = gauss_legendre(7);
        assert_eq!(rule.nodes[3], 0.0);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hermite_moments() {
        for n in [20, 80, 120] {
            let rule = gauss_hermite(n);
            let m0: f64 = rule.weights.iter().sum();
            assert!((m0 - PI.sqrt()).abs() < 1e-12, "n={n} m0={m0}");
            // ∫ y^4 e^{-y²} = 3√π/4
            let m4: f64 = rule.integrate(|y| y.powi(4));
            assert!((m4 - 0.75 * PI.sqrt()).abs() < 1e-11, "n={n}");
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn scaled_hermite_stays_finite() {
        for n in [40, 600, 1000] {
            let rule = gauss_hermite_scaled(n);
            assert!(rule.weights.iter().all(|w| w.is_finite() && *w > 0.0), "n={n}");
            // ∫ e^{-y²/2} dy = √(2π), integrand supplied without the weight
            let v: f64 = rule.integrate(|y| (-0.5 * y * y).exp());
            assert!((v - (2.0 * PI).sqrt()).abs() < 1e-10, "n={n} v={v}");
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
        let (a, b) = (gauss_hermite(60), gauss_hermite_scaled(60));
        for i in 0..60 {
            assert!((a.weights[i] - b.weights[i] * (-b.nodes[i] * b.nodes[i]).exp()).abs() < 1e-300_f64.max(1e-15 * a.weights[i]));
        }
    }

    #[test]
    fn tanh_sinh_bump_normalization() {
        let bump = |x: f64| if x.abs() < 1.0 { (-1.0 / (1.0 - x * x)).exp() } else { 0.0 };
        let (v, diff) = tanh_sinh(bump, -1.0, 1.0, 1e-15, 12);
        assert!(diff < 1e-13);
        // high-precision reference 0.443993816168079437823...
        assert!((v - 0.443_993_816_168_079_4).abs() < 1e-14, "{v}");
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::<f64>::new();
        s.add(1e16);
        for _ in 0..10 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 10.0);
    }
}
