//! The bilinear dual pairing `⟨φ, v⟩ = Σ_k φ_k v_k`.
//!
//! When both vectors have infinite tails the sum is truncated at the smallest
//! symmetric range whose envelope tail bound
//!
//! ```text
//! |Σ_{|k|>N} φ_k v_k| ≤ C_φ C_v Σ_{|k|>N} (1+|k|)^s ≤ 2 C_φ C_v (1+N)^{s+1} / (-s-1),   s = r_φ + r_v
//! ```
//!
//! falls below the requested tolerance (one-sided domains drop the factor 2).

use alloc::format;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::coeff::{CoefficientVector, GrowthClass, IndexDomain};
use crate::error::{Error, Result};
use crate::quadrature::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingOptions {
    /// Target bound on the neglected tail.
    pub abs_tol: f64,
    /// Largest admissible `N` (number of indices on each side).
    pub max_terms: usize,
}

impl Default for PairingOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_terms: 1 << 22,
        }
    }
}

/// Value together with the summation range and the certified tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingOutcome {
    pub value: Complex64,
    /// Indices `lo..=hi` that were summed.
    pub lo: i64,
    pub hi: i64,
    /// Envelope bound on the neglected terms (0 for exact finite sums).
    pub tail_bound: f64,
}

/// `⟨φ, v⟩` with default options.
pub fn pair(phi: &CoefficientVector, v: &CoefficientVector) -> Result<Complex64> {
    pair_with(phi, v, &PairingOptions::default()).map(|o| o.value)
}

/// `⟨φ, v⟩` with explicit options, reporting the summation range.
pub fn pair_with(phi: &CoefficientVector, v: &CoefficientVector, opts: &PairingOptions) -> Result<PairingOutcome> {
    if phi.domain() != v.domain() {
        return Err(Error::DomainMismatch);
    }
    check_classes(phi, v)?;
    let domain = phi.domain();

    // an exactly finite factor makes the sum finite
    let finite = [phi, v].into_iter().filter(|x| x.has_zero_tail()).min_by_key(|x| x.prefix().len());
    if let Some(f) = finite {
        let (lo, hi) = (f.start(), f.end() - 1);
        return Ok(PairingOutcome {
            value: sum_range(phi, v, lo, hi),
            lo,
            hi,
            tail_bound: 0.0,
        });
    }

    let (ep, ev) = (phi.envelope(), v.envelope());
    let s = ep.degree() + ev.degree();
    let sides = if domain == IndexDomain::Integers { 2.0 } else { 1.0 };
    let c = sides * ep.constant() * ev.constant();
    let bound_at = |n: f64| c * (1.0 + n).powf(s + 1.0) / (-s - 1.0);
    if s >= -1.0 {
        return Err(Error::Budget {
            terms: 0,
            achieved: f64::INFINITY,
            tolerance: opts.abs_tol,
        });
    }
    let stored = phi.support_extent().max(v.support_extent()).max(phi.end()).max(v.end());
    // smallest N with bound_at(N) < abs_tol
    let needed = ((opts.abs_tol * (-s - 1.0) / c).powf(1.0 / (s + 1.0)) - 1.0).ceil().max(0.0);
    if needed > opts.max_terms as f64 {
        return Err(Error::Budget {
            terms: opts.max_terms,
            achieved: bound_at(opts.max_terms as f64),
            tolerance: opts.abs_tol,
        });
    }
    let n = (needed as i64).max(stored);
    let lo = if domain == IndexDomain::Integers { -n } else { 0 };
    Ok(PairingOutcome {
        value: sum_range(phi, v, lo, n),
        lo,
        hi: n,
        tail_bound: bound_at(n as f64),
    })
}

fn check_classes(phi: &CoefficientVector, v: &CoefficientVector) -> Result<()> {
    use GrowthClass::*;
    match (phi.class(), v.class()) {
        (PolynomialGrowth, PolynomialGrowth) => Err(Error::UnpairedDistributions),
        (PolynomialGrowth, SquareSummable) | (SquareSummable, PolynomialGrowth) => {
            if phi.has_zero_tail() || v.has_zero_tail() {
                Ok(())
            } else {
                Err(Error::Precondition(format!(
                    "a {} vector pairs only with rapid-decay vectors, got {} x {}",
                    PolynomialGrowth,
                    phi.class(),
                    v.class()
                )))
            }
        }
        _ => Ok(()),
    }
}

fn sum_range(phi: &CoefficientVector, v: &CoefficientVector, lo: i64, hi: i64) -> Complex64 {
    let mut acc = CompensatedSum::<Complex64>::zero();
    for k in lo..=hi {
        let a = phi.coeff(k);
        if a != Complex64::new(0.0, 0.0) {
            acc.add(a * v.coeff(k));
        }
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Formula, GrowthEnvelope};

    fn comb() -> CoefficientVector {
        CoefficientVector::from_formula(
            IndexDomain::Integers,
            Formula::registered("constant", &[1.0, 0.0]).unwrap(),
            GrowthEnvelope::new(1.0, 0.0).unwrap(),
            GrowthClass::PolynomialGrowth,
        )
        .unwrap()
    }

    fn geometric(q: f64) -> CoefficientVector {
        CoefficientVector::from_formula(
            IndexDomain::Integers,
            Formula::registered("geometric", &[q]).unwrap(),
            GrowthEnvelope::for_geometric(q, -12.0).unwrap(),
            GrowthClass::RapidDecay,
        )
        .unwrap()
    }

    #[test]
    fn unit_vectors() {
        let e3 = CoefficientVector::unit(IndexDomain::Integers, 3).unwrap();
        assert_eq!(pair(&e3, &e3).unwrap(), Complex64::new(1.0, 0.0));
        let e4 = CoefficientVector::unit(IndexDomain::Integers, 4).unwrap();
        assert_eq!(pair(&e3, &e4).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn comb_against_exponential() {
        let e = (-1.0f64).exp();
        let expect = (1.0 + e) / (1.0 - e);
        let out = pair_with(&comb(), &geometric(e), &PairingOptions::default()).unwrap();
        assert!((out.value.re - expect).abs() < 1e-12, "{}", out.value);
        assert!(out.tail_bound < 1e-12);
        assert_eq!(out.lo, -out.hi);
    }

    #[test]
    fn two_distributions_are_unpaired() {
        assert_eq!(pair(&comb(), &comb()), Err(Error::UnpairedDistributions));
    }

    #[test]
    fn domain_mismatch() {
        let a = CoefficientVector::unit(IndexDomain::Integers, 0).unwrap();
        let b = CoefficientVector::unit(IndexDomain::Naturals, 0).unwrap();
        assert_eq!(pair(&a, &b), Err(Error::DomainMismatch));
    }

    #[test]
    fn budget_error_reports_bound() {
        // s = 0 - 1.5: converges, but slowly
        let slow = CoefficientVector::from_formula(
            IndexDomain::Integers,
            Formula::registered("inv_one_plus_sq", &[0.75]).unwrap(),
            GrowthEnvelope::new(2.0f64.powf(0.75), -1.5).unwrap(),
            GrowthClass::RapidDecay,
        )
        .unwrap();
        let opts = PairingOptions {
            abs_tol: 1e-12,
            max_terms: 10_000,
        };
        match pair_with(&comb(), &slow, &opts) {
            Err(Error::Budget { achieved, .. }) => assert!(achieved > 1e-12 && achieved.is_finite()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn finite_factor_sums_exactly() {
        let v = CoefficientVector::finite_real(IndexDomain::Integers, -1, &[2.0, 3.0, 5.0]).unwrap();
        let out = pair_with(&comb(), &v, &PairingOptions::default()).unwrap();
        assert_eq!(out.value, Complex64::new(10.0, 0.0));
        assert_eq!((out.lo, out.hi, out.tail_bound), (-1, 1, 0.0));
    }
}
