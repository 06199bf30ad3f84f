//! Hermite functions normalized as `h_0(x) = 2^{1/4} e^{-πx²}`.
//!
//! With this scaling `{h_k}` is orthonormal in `L²(R, dx)` and the ladder
//! operator `A = (d/dx + 2πx) / (2√π)` satisfies `A h_k = √k h_{k-1}`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// `(2π)^{1/4}`, the factor relating `h_k(x)` to the physicists' `ψ_k(√(2π)x)`.
fn scale() -> f64 {
    (2.0 * PI).powf(0.25)
}

/// Values `h_0(x), …, h_{n-1}(x)` by the three-term recurrence.
pub fn hermite_functions(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    fill_hermite_functions(x, n, &mut out);
    out
}

/// Writes `h_0(x), …, h_{n-1}(x)` into `out` (cleared first).
pub fn fill_hermite_functions(x: f64, n: usize, out: &mut Vec<f64>) {
    out.clear();
    if n == 0 {
        return;
    }
    let y = (2.0 * PI).sqrt() * x;
    let s = scale();
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * y * y).exp();
    out.push(s * cur);
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * y * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(s * cur);
    }
}

/// `h_k(0)` for `k < n`; odd entries vanish.
pub fn hermite_at_zero(n: usize) -> Vec<f64> {
    let mut out = alloc::vec![0.0; n];
    if n == 0 {
        return out;
    }
    out[0] = 2.0f64.powf(0.25);
    let mut k = 2;
    while k < n {
        let kf = k as f64;
        out[k] = -((kf - 1.0) / kf).sqrt() * out[k - 2];
        k += 2;
    }
    out
}

/// `h_k(0)` for a single index: the recurrence for small `k`, the closed form
/// `2^{1/4} (-1)^m √((2m)!) / (2^m m!)` through `ln Γ` beyond.
pub fn hermite_value_at_zero(k: u64) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    if k > 512 {
        let m = (k / 2) as f64;
        let log_mag = 0.5 * libm::lgamma(2.0 * m + 1.0) - m * core::f64::consts::LN_2 - libm::lgamma(m + 1.0);
        let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        return sign * 2.0f64.powf(0.25) * log_mag.exp();
    }
    let mut v = 2.0f64.powf(0.25);
    let mut j = 2u64;
    while j <= k {
        let jf = j as f64;
        v *= -((jf - 1.0) / jf).sqrt();
        j += 2;
    }
    v
}

/// Pointwise synthesis `Σ_k c_k h_k(x)`.
pub fn synthesize(coeffs: &[Complex64], x: f64) -> Complex64 {
    let h = hermite_functions(x, coeffs.len());
    coeffs.iter().zip(&h).map(|(c, &hk)| c * hk).sum()
}
