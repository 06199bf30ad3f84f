//! Coefficient vectors indexed by `Z` or `N` with declared growth envelopes.
//!
//! A [`CoefficientVector`] stores a finite prefix of complex coefficients and a
//! tail that is either identically zero or given by a [`Formula`]. Its
//! [`GrowthEnvelope`] `|c_k| ≤ C (1+|k|)^r` is declared by the caller and
//! validated, never inferred; the pairing uses it to bound truncation error.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hermite::hermite_value_at_zero;

/// Relative slack allowed when validating an envelope against stored values.
const ENVELOPE_SLACK: f64 = 1e-12;

/// Number of tail indices on each side sampled when validating an envelope.
const TAIL_SAMPLE: i64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexDomain {
    /// Two-sided sequences indexed by `Z`.
    Integers,
    /// One-sided sequences indexed by `N = {0, 1, …}`.
    Naturals,
}

impl IndexDomain {
    pub fn contains(self, k: i64) -> bool {
        match self {
            IndexDomain::Integers => true,
            IndexDomain::Naturals => k >= 0,
        }
    }
}

/// Growth class tag: smooth vectors, Hilbert vectors, distribution vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GrowthClass {
    RapidDecay,
    SquareSummable,
    PolynomialGrowth,
}

impl GrowthClass {
    /// The weaker (larger) of two classes.
    pub fn join(self, other: GrowthClass) -> GrowthClass {
        self.max(other)
    }
}

/// Bound `|c_k| ≤ constant · (1+|k|)^degree`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthEnvelope {
    constant: f64,
    degree: f64,
}

impl GrowthEnvelope {
    pub fn new(constant: f64, degree: f64) -> Result<Self> {
        if !(constant > 0.0 && constant.is_finite()) {
            return Err(Error::InvalidEnvelope(constant));
        }
        if !degree.is_finite() {
            return Err(Error::Precondition(format!("envelope degree must be finite, got {degree}")));
        }
        Ok(Self { constant, degree })
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn bound(&self, k: i64) -> f64 {
        self.constant * (1.0 + (k.unsigned_abs() as f64)).powf(self.degree)
    }

    /// Envelope for `q^{|k|}`, `0 < q < 1`, at the given (negative) degree:
    /// the constant is `max_{k ≥ 0} q^k (1+k)^{-degree}`, attained near
    /// `k = -degree / ln(1/q) - 1`.
    pub fn for_geometric(q: f64, degree: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Precondition(format!("geometric ratio must lie in (0,1), got {q}")));
        }
        let s = -degree;
        let peak = if s <= 0.0 { 0.0 } else { (s / (-q.ln()) - 1.0).max(0.0) };
        let lo = peak.floor() as i64;
        let c = [lo, lo + 1]
            .iter()
            .map(|&k| q.powf(k as f64) * (1.0 + k as f64).powf(s))
            .fold(1.0f64, f64::max);
        Self::new(c * (1.0 + ENVELOPE_SLACK), degree)
    }

    /// Envelope for `e^{-a k²}`, `a > 0`, at the given (negative) degree.
    pub fn for_gaussian(a: f64, degree: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Precondition(format!("gaussian rate must be positive, got {a}")));
        }
        let s = -degree;
        // maximizer of -a x² + s ln(1+x) solves 2a x(1+x) = s
        let peak = if s <= 0.0 {
            0.0
        } else {
            0.5 * (-1.0 + (1.0 + 2.0 * s / a).sqrt())
        };
        let lo = peak.floor() as i64;
        let c = [lo, lo + 1]
            .iter()
            .map(|&k| (-a * (k * k) as f64).exp() * (1.0 + k as f64).powf(s))
            .fold(1.0f64, f64::max);
        Self::new(c * (1.0 + ENVELOPE_SLACK), degree)
    }
}

/// Coefficient of the unit-norm Gaussian `(2/σ²)^{1/4} e^{-πx²/σ²}` on `h_k`:
/// zero for odd `k`, and for `k = 2m`
/// `√(2σ/(1+σ²)) · √((2m)!) / (2^m m!) · τ^m` with `τ = (σ²-1)/(σ²+1)`.
pub fn dilated_gaussian_coeff(s2: f64, k: i64) -> f64 {
    if k < 0 || k % 2 == 1 {
        return 0.0;
    }
    let m = (k / 2) as f64;
    let s = s2.sqrt();
    let lead = (2.0 * s / (1.0 + s2)).sqrt();
    if k == 0 {
        return lead;
    }
    let tau = (s2 - 1.0) / (s2 + 1.0);
    if tau == 0.0 {
        return 0.0;
    }
    let log_mag = 0.5 * libm::lgamma(2.0 * m + 1.0) - m * core::f64::consts::LN_2 - libm::lgamma(m + 1.0)
        + m * tau.abs().ln();
    let sign = if tau < 0.0 && (k / 2) % 2 == 1 { -1.0 } else { 1.0 };
    sign * lead * log_mag.exp()
}

type FormulaFn = dyn Fn(i64) -> Complex64 + Send + Sync;

/// A named closure `index → coefficient` used as the tail of a vector.
///
/// Registered names (see [`Formula::registered`]) can be rebuilt from
/// `(name, params)` and therefore serialized; derived formulas cannot.
#[derive(Clone)]
pub struct Formula {
    name: String,
    params: Vec<f64>,
    serializable: bool,
    eval: Arc<FormulaFn>,
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Formula")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

impl Formula {
    /// A derived (non-serializable) formula.
    pub fn custom<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(i64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            params: Vec::new(),
            serializable: false,
            eval: Arc::new(f),
        }
    }

    /// Rebuilds one of the registered formulas:
    ///
    /// | name | params | `c_k` |
    /// |---|---|---|
    /// | `constant` | `[re, im]` | `re + i·im` |
    /// | `power` | `[r]` | `k^r` for integer `r`, `|k|^r` otherwise; `1` at `k = 0` unless `r > 0` |
    /// | `geometric` | `[q]` | `q^{|k|}` |
    /// | `gaussian` | `[a]` | `e^{-a k²}` |
    /// | `inv_one_plus_sq` | `[m]` | `(1+k²)^{-m}` |
    /// | `dilated_gaussian` | `[σ²]` | Hermite coefficients of `(2/σ²)^{1/4} e^{-πx²/σ²}` |
    /// | `hermite_zero` | `[]` | `h_k(0)` |
    pub fn registered(name: &str, params: &[f64]) -> Result<Self> {
        let arity = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::Precondition(format!(
                    "formula `{name}` takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let eval: Arc<FormulaFn> = match name {
            "constant" => {
                arity(2)?;
                let c = Complex64::new(params[0], params[1]);
                Arc::new(move |_| c)
            }
            "power" => {
                arity(1)?;
                let r = params[0];
                let at_zero = Complex64::new(if r > 0.0 { 0.0 } else { 1.0 }, 0.0);
                if r.fract() == 0.0 {
                    let e = r as i32;
                    Arc::new(move |k| {
                        if k == 0 {
                            at_zero
                        } else {
                            Complex64::new((k as f64).powi(e), 0.0)
                        }
                    })
                } else {
                    Arc::new(move |k| {
                        if k == 0 {
                            at_zero
                        } else {
                            Complex64::new((k.unsigned_abs() as f64).powf(r), 0.0)
                        }
                    })
                }
            }
            "geometric" => {
                arity(1)?;
                let q = params[0];
                Arc::new(move |k| Complex64::new(q.powf(k.unsigned_abs() as f64), 0.0))
            }
            "gaussian" => {
                arity(1)?;
                let a = params[0];
                Arc::new(move |k| Complex64::new((-a * (k as f64) * (k as f64)).exp(), 0.0))
            }
            "inv_one_plus_sq" => {
                arity(1)?;
                let m = params[0];
                Arc::new(move |k| Complex64::new((1.0 + (k as f64) * (k as f64)).powf(-m), 0.0))
            }
            "dilated_gaussian" => {
                arity(1)?;
                let s2 = params[0];
                if !(s2 > 0.0 && s2.is_finite()) {
                    return Err(Error::Precondition(format!("dilation must be positive, got {s2}")));
                }
                Arc::new(move |k| Complex64::new(dilated_gaussian_coeff(s2, k), 0.0))
            }
            "hermite_zero" => {
                arity(0)?;
                Arc::new(|k| {
                    if k < 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(hermite_value_at_zero(k as u64), 0.0)
                    }
                })
            }
            other => return Err(Error::Unsupported(format!("unknown formula `{other}`"))),
        };
        Ok(Self {
            name: name.to_string(),
            params: params.to_vec(),
            serializable: true,
            eval,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn is_serializable(&self) -> bool {
        self.serializable
    }

    pub fn eval(&self, k: i64) -> Complex64 {
        (self.eval)(k)
    }
}

#[derive(Debug, Clone)]
pub enum Tail {
    Zero,
    Formula(Formula),
}

/// Indexed coefficient family with a growth class and envelope.
#[derive(Debug, Clone)]
pub struct CoefficientVector {
    domain: IndexDomain,
    start: i64,
    prefix: Vec<Complex64>,
    tail: Tail,
    envelope: GrowthEnvelope,
    class: GrowthClass,
}

impl CoefficientVector {
    /// Validates the envelope on the stored prefix and on a short sampled
    /// window of the tail on each side.
    pub fn new(
        domain: IndexDomain,
        start: i64,
        prefix: Vec<Complex64>,
        tail: Tail,
        envelope: GrowthEnvelope,
        class: GrowthClass,
    ) -> Result<Self> {
        if domain == IndexDomain::Naturals && start < 0 {
            return Err(Error::Precondition(format!(
                "prefix of a one-sided vector starts at {start} < 0"
            )));
        }
        let v = Self {
            domain,
            start,
            prefix,
            tail,
            envelope,
            class,
        };
        v.check_envelope(v.start, v.end())?;
        if let Tail::Formula(_) = v.tail {
            v.check_envelope(v.end(), v.end() + TAIL_SAMPLE)?;
            if domain == IndexDomain::Integers {
                v.check_envelope(v.start - TAIL_SAMPLE, v.start)?;
            } else {
                v.check_envelope(0, v.start)?;
            }
        }
        Ok(v)
    }

    /// Unchecked construction for internal operations whose envelopes are
    /// derived from valid inputs.
    pub(crate) fn from_parts(
        domain: IndexDomain,
        start: i64,
        prefix: Vec<Complex64>,
        tail: Tail,
        envelope: GrowthEnvelope,
        class: GrowthClass,
    ) -> Self {
        Self {
            domain,
            start,
            prefix,
            tail,
            envelope,
            class,
        }
    }

    /// Finitely supported vector (class `RapidDecay`, zero tail).
    pub fn finite(domain: IndexDomain, start: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let constant = if max > 0.0 { max * (1.0 + ENVELOPE_SLACK) } else { 1.0 };
        Self::new(
            domain,
            start,
            coeffs,
            Tail::Zero,
            GrowthEnvelope::new(constant, 0.0)?,
            GrowthClass::RapidDecay,
        )
    }

    /// Real finitely supported vector.
    pub fn finite_real(domain: IndexDomain, start: i64, coeffs: &[f64]) -> Result<Self> {
        Self::finite(domain, start, coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn unit(domain: IndexDomain, k: i64) -> Result<Self> {
        Self::finite(domain, k, alloc::vec![Complex64::new(1.0, 0.0)])
    }

    pub fn zero(domain: IndexDomain) -> Self {
        Self::from_parts(
            domain,
            0,
            Vec::new(),
            Tail::Zero,
            GrowthEnvelope { constant: 1.0, degree: 0.0 },
            GrowthClass::RapidDecay,
        )
    }

    /// Vector given entirely by a formula.
    pub fn from_formula(
        domain: IndexDomain,
        formula: Formula,
        envelope: GrowthEnvelope,
        class: GrowthClass,
    ) -> Result<Self> {
        Self::new(domain, 0, Vec::new(), Tail::Formula(formula), envelope, class)
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn class(&self) -> GrowthClass {
        self.class
    }

    pub fn envelope(&self) -> GrowthEnvelope {
        self.envelope
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn prefix(&self) -> &[Complex64] {
        &self.prefix
    }

    /// First stored index.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last stored index.
    pub fn end(&self) -> i64 {
        self.start + self.prefix.len() as i64
    }

    pub fn has_zero_tail(&self) -> bool {
        matches!(self.tail, Tail::Zero)
    }

    /// Largest `|k|` covered by the stored prefix (0 when empty).
    pub fn support_extent(&self) -> i64 {
        if self.prefix.is_empty() {
            0
        } else {
            self.start.abs().max((self.end() - 1).abs())
        }
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if !self.domain.contains(k) {
            return Complex64::new(0.0, 0.0);
        }
        if k >= self.start && k < self.end() {
            return self.prefix[(k - self.start) as usize];
        }
        match &self.tail {
            Tail::Zero => Complex64::new(0.0, 0.0),
            Tail::Formula(f) => f.eval(k),
        }
    }

    /// Coefficients on `lo..hi` (indices outside the domain read as zero).
    pub fn coeffs(&self, lo: i64, hi: i64) -> Vec<Complex64> {
        (lo..hi).map(|k| self.coeff(k)).collect()
    }

    /// Checks `|c_k| ≤ bound(k)` on `lo..hi`.
    pub fn check_envelope(&self, lo: i64, hi: i64) -> Result<()> {
        self.check_against(self.envelope, lo, hi)
    }

    /// Checks a different envelope on `lo..hi` without replacing the declared one.
    pub fn check_against(&self, envelope: GrowthEnvelope, lo: i64, hi: i64) -> Result<()> {
        for k in lo..hi {
            if !self.domain.contains(k) {
                continue;
            }
            let modulus = self.coeff(k).norm();
            let bound = envelope.bound(k);
            if !(modulus <= bound * (1.0 + ENVELOPE_SLACK)) {
                return Err(Error::EnvelopeViolation { index: k, modulus, bound });
            }
        }
        Ok(())
    }

    pub fn with_class(mut self, class: GrowthClass) -> Self {
        self.class = class;
        self
    }

    /// Replaces the envelope after validating it on the prefix and a sampled tail window.
    pub fn with_envelope(self, envelope: GrowthEnvelope) -> Result<Self> {
        Self::new(self.domain, self.start, self.prefix, self.tail, envelope, self.class)
    }

    /// Index-wise map `c_k ↦ g(k, c_k)`; the tail formula is composed with `g`.
    /// The caller supplies an envelope valid for the result (not re-checked).
    pub fn map_indexed<G>(&self, g: G, envelope: GrowthEnvelope, class: GrowthClass) -> Self
    where
        G: Fn(i64, Complex64) -> Complex64 + Send + Sync + Clone + 'static,
    {
        let prefix = self
            .prefix
            .iter()
            .enumerate()
            .map(|(i, &c)| g(self.start + i as i64, c))
            .collect();
        let tail = match &self.tail {
            Tail::Zero => Tail::Zero,
            Tail::Formula(f) => {
                let inner = f.clone();
                let name = format!("map({})", f.name());
                Tail::Formula(Formula::custom(name, move |k| g(k, inner.eval(k))))
            }
        };
        Self::from_parts(self.domain, self.start, prefix, tail, envelope, class)
    }

    /// Multiplies every coefficient by `alpha`.
    pub fn scale(&self, alpha: Complex64) -> Self {
        let c = (self.envelope.constant * alpha.norm()).max(f64::MIN_POSITIVE);
        let env = GrowthEnvelope { constant: c, degree: self.envelope.degree };
        self.map_indexed(move |_, x| x * alpha, env, self.class)
    }

    /// `α·self + β·other` on a common domain.
    pub fn linear_combination(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let (lo, hi) = if self.prefix.is_empty() {
            (other.start, other.end())
        } else if other.prefix.is_empty() {
            (self.start, self.end())
        } else {
            (self.start.min(other.start), self.end().max(other.end()))
        };
        let prefix = (lo..hi)
            .map(|k| alpha * self.coeff(k) + beta * other.coeff(k))
            .collect();
        let tail = match (&self.tail, &other.tail) {
            (Tail::Zero, Tail::Zero) => Tail::Zero,
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Tail::Formula(Formula::custom("linear_combination", move |k| {
                    alpha * a.coeff(k) + beta * b.coeff(k)
                }))
            }
        };
        let degree = self.envelope.degree.max(other.envelope.degree);
        let constant = (alpha.norm() * self.envelope.constant + beta.norm() * other.envelope.constant)
            .max(f64::MIN_POSITIVE);
        Ok(Self::from_parts(
            self.domain,
            lo,
            prefix,
            tail,
            GrowthEnvelope { constant, degree },
            self.class.join(other.class),
        ))
    }

    /// Finite vector holding the coefficients on `lo..hi`.
    pub fn truncate(&self, lo: i64, hi: i64) -> Self {
        let lo = if self.domain == IndexDomain::Naturals { lo.max(0) } else { lo };
        let hi = hi.max(lo);
        let prefix = self.coeffs(lo, hi);
        Self::from_parts(self.domain, lo, prefix, Tail::Zero, self.envelope, GrowthClass::RapidDecay)
    }

    /// Least-squares slope of `-ln|c_k|` against `ln(1+|k|)` over `lo..hi`,
    /// skipping exact zeros. `None` if fewer than two nonzero samples.
    pub fn fitted_decay_exponent(&self, lo: i64, hi: i64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = (lo..hi)
            .filter(|&k| self.domain.contains(k))
            .filter_map(|k| {
                let m = self.coeff(k).norm();
                (m > 0.0).then(|| ((1.0 + k.unsigned_abs() as f64).ln(), -m.ln()))
            })
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }

    /// Rapid-decay probe: for each `r`, the smallest constant with
    /// `|c_k| ≤ C (1+|k|)^{-r}` on `lo..hi`. All returned constants are finite
    /// by construction on a finite window; the caller compares them against a
    /// budget (a rapid-decay vector keeps them bounded as the window grows).
    pub fn decay_constants(&self, rs: &[f64], lo: i64, hi: i64) -> Vec<f64> {
        rs.iter()
            .map(|&r| {
                (lo..hi)
                    .filter(|&k| self.domain.contains(k))
                    .map(|k| self.coeff(k).norm() * (1.0 + k.unsigned_abs() as f64).powf(r))
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    /// Partial sums `Σ_{|k| ≤ n} |c_k|²` for each `n` in `radii`.
    pub fn square_partial_sums(&self, radii: &[i64]) -> Vec<f64> {
        radii
            .iter()
            .map(|&n| {
                let lo = if self.domain == IndexDomain::Naturals { 0 } else { -n };
                let mut acc = crate::quadrature::CompensatedSum::<f64>::new();
                for k in lo..=n {
                    acc.add(self.coeff(k).norm_sqr());
                }
                acc.value()
            })
            .collect()
    }

    /// Cauchy check on square partial sums: successive differences over the
    /// expanding radii must fall below `tol` by the last step.
    pub fn square_summable_cauchy(&self, radii: &[i64], tol: f64) -> (bool, f64) {
        let sums = self.square_partial_sums(radii);
        let last = sums
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .next_back()
            .unwrap_or(0.0);
        (last < tol, last)
    }
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GrowthClass::RapidDecay => "rapid-decay",
            GrowthClass::SquareSummable => "square-summable",
            GrowthClass::PolynomialGrowth => "polynomial-growth",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn envelope_rejects_nonpositive_constant() {
        assert!(GrowthEnvelope::new(0.0, 1.0).is_err());
        assert!(GrowthEnvelope::new(-1.0, 1.0).is_err());
        assert!(GrowthEnvelope::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn envelope_violation_is_reported_with_index() {
        let env = GrowthEnvelope::new(1.0, 0.0).unwrap();
        let err = CoefficientVector::new(
            IndexDomain::Integers,
            -1,
            vec![c(0.5), c(2.0), c(0.1)],
            Tail::Zero,
            env,
            GrowthClass::PolynomialGrowth,
        )
        .unwrap_err();
        assert!(matches!(err, Error::EnvelopeViolation { index: 0, .. }));
    }

    #[test]
    fn tail_sample_is_checked() {
        let f = Formula::registered("power", &[2.0]).unwrap();
        let env = GrowthEnvelope::new(1.0, 1.0).unwrap();
        assert!(CoefficientVector::from_formula(IndexDomain::Integers, f.clone(), env, GrowthClass::PolynomialGrowth).is_err());
        let env = GrowthEnvelope::new(1.0, 2.0).unwrap();
        assert!(CoefficientVector::from_formula(IndexDomain::Integers, f, env, GrowthClass::PolynomialGrowth).is_ok());
    }

    #[test]
    fn zero_tail_vanishes_outside_prefix() {
        let v = CoefficientVector::finite_real(IndexDomain::Integers, -2, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(v.coeff(-3), c(0.0));
        assert_eq!(v.coeff(1), c(0.0));
        assert_eq!(v.coeff(0), c(3.0));
        assert_eq!(v.support_extent(), 2);
    }

    #[test]
    fn naturals_read_zero_below_origin() {
        let f = Formula::registered("constant", &[1.0, 0.0]).unwrap();
        let v = CoefficientVector::from_formula(
            IndexDomain::Naturals,
            f,
            GrowthEnvelope::new(1.0, 0.0).unwrap(),
            GrowthClass::PolynomialGrowth,
        )
        .unwrap();
        assert_eq!(v.coeff(-1), c(0.0));
        assert_eq!(v.coeff(7), c(1.0));
    }

    #[test]
    fn geometric_and_gaussian_envelopes_hold() {
        for &(q, d) in &[(0.3678794411714423, -10.0), (0.5, -4.0), (0.9, -20.0)] {
            let env = GrowthEnvelope::for_geometric(q, d).unwrap();
            let f = Formula::registered("geometric", &[q]).unwrap();
            let v = CoefficientVector::from_formula(IndexDomain::Integers, f, env, GrowthClass::RapidDecay).unwrap();
            v.check_envelope(-2000, 2000).unwrap();
        }
        for &(a, d) in &[(1.0, -12.0), (0.01, -6.0)] {
            let env = GrowthEnvelope::for_gaussian(a, d).unwrap();
            let f = Formula::registered("gaussian", &[a]).unwrap();
            let v = CoefficientVector::from_formula(IndexDomain::Integers, f, env, GrowthClass::RapidDecay).unwrap();
            v.check_envelope(-500, 500).unwrap();
        }
    }

    #[test]
    fn hermite_zero_formula_fits_unit_envelope() {
        let f = Formula::registered("hermite_zero", &[]).unwrap();
        let v = CoefficientVector::from_formula(
            IndexDomain::Naturals,
            f,
            GrowthEnvelope::new(1.2, 0.0).unwrap(),
            GrowthClass::PolynomialGrowth,
        )
        .unwrap();
        v.check_envelope(0, 4000).unwrap();
    }

    #[test]
    fn unknown_formula_is_rejected() {
        assert!(matches!(Formula::registered("nope", &[]), Err(Error::Unsupported(_))));
        assert!(Formula::registered("power", &[]).is_err());
    }

    #[test]
    fn decay_probe_separates_classes() {
        let f = Formula::registered("geometric", &[0.5]).unwrap();
        let rapid = CoefficientVector::from_formula(
            IndexDomain::Integers,
            f,
            GrowthEnvelope::for_geometric(0.5, -8.0).unwrap(),
            GrowthClass::RapidDecay,
        )
        .unwrap();
        let f = Formula::registered("inv_one_plus_sq", &[1.0]).unwrap();
        let l2 = CoefficientVector::from_formula(
            IndexDomain::Integers,
            f,
            GrowthEnvelope::new(2.0, -2.0).unwrap(),
            GrowthClass::SquareSummable,
        )
        .unwrap();
        let small = rapid.decay_constants(&[4.0], -200, 200)[0];
        let big = rapid.decay_constants(&[4.0], -400, 400)[0];
        assert_eq!(small, big);
        let a = l2.decay_constants(&[4.0], -200, 200)[0];
        let b = l2.decay_constants(&[4.0], -400, 400)[0];
        assert!(b > 3.0 * a);
        let (ok, _) = l2.square_summable_cauchy(&[100, 1000, 10000], 1e-8);
        assert!(ok);
    }
}
