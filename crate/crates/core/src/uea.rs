//! Universal enveloping algebra in the normal-ordered monomial basis.
//!
//! Elements are finite sums `Σ c_α X^α` with `X^α = X_1^{α_1} ⋯ X_l^{α_l}`.
//! Products are reduced to this basis by adjacent transpositions
//! `X_j X_i = X_i X_j + [X_j, X_i]` (`i < j`), lowest index moving left.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Multi-index `α`, one exponent per basis generator.
pub type MultiIndex = Vec<u32>;

/// Structure constants `[X_i, X_j] = Σ_k c^k_{ij} X_k` on a labelled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    brackets: Vec<Vec<(usize, Complex64)>>,
}

/// `[X_i, X_j] = Σ c_k X_k` as `(i, j, [(k, c_k)])`.
pub type Relation = (usize, usize, Vec<(usize, Complex64)>);

impl LieAlgebra {
    /// Builds the table from relations `[X_i, X_j] = Σ c_k X_k` given for some
    /// ordered pairs; the opposite pairs are filled by antisymmetry. A pair given
    /// in both orders must be consistent, and `[X_i, X_i]` must vanish.
    pub fn new(labels: Vec<String>, relations: &[Relation]) -> Result<Self> {
        let l = labels.len();
        let mut table: Vec<Option<Vec<(usize, Complex64)>>> = vec![None; l * l];
        for (i, j, rhs) in relations {
            let (i, j) = (*i, *j);
            if i >= l || j >= l || rhs.iter().any(|(k, _)| *k >= l) {
                return Err(Error::BasisMismatch(format!("relation [{i},{j}] refers to a generator outside the basis of size {l}")));
            }
            let rhs: Vec<(usize, Complex64)> = rhs.iter().copied().filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect();
            if i == j && !rhs.is_empty() {
                return Err(Error::BasisMismatch(format!("[X_{i}, X_{i}] must vanish")));
            }
            let neg: Vec<(usize, Complex64)> = rhs.iter().map(|&(k, c)| (k, -c)).collect();
            for (slot, val) in [(i * l + j, rhs), (j * l + i, neg)] {
                match &table[slot] {
                    Some(existing) if !same_combination(existing, &val) => {
                        return Err(Error::BasisMismatch(format!(
                            "relations table is not antisymmetric at ({i},{j})"
                        )));
                    }
                    _ => table[slot] = Some(val),
                }
            }
        }
        Ok(Self {
            labels,
            brackets: table.into_iter().map(|b| b.unwrap_or_default()).collect(),
        })
    }

    pub fn abelian(labels: &[&str]) -> Self {
        Self::new(labels.iter().map(|s| s.to_string()).collect(), &[]).expect("abelian table is valid")
    }

    /// One generator `X` (the circle group).
    pub fn torus() -> Self {
        Self::abelian(&["X"])
    }

    /// Basis `P, Q, Z` with `[P, Q] = Z` and `Z` central.
    pub fn heisenberg() -> Self {
        Self::new(
            vec!["P".into(), "Q".into(), "Z".into()],
            &[(0, 1, vec![(2, Complex64::new(1.0, 0.0))])],
        )
        .expect("heisenberg table is valid")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `[X_i, X_j]` as a sparse combination.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Complex64)] {
        &self.brackets[i * self.dim() + j]
    }
}

fn same_combination(a: &[(usize, Complex64)], b: &[(usize, Complex64)]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by_key(|p| p.0);
    b.sort_by_key(|p| p.0);
    a == b
}

/// Element of `U(g)` with complex coefficients on normal-ordered monomials.
///
/// Zero coefficients are never stored, so structural equality is equality in
/// the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct UeaElement {
    algebra: Arc<LieAlgebra>,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl UeaElement {
    pub fn zero(algebra: &Arc<LieAlgebra>) -> Self {
        Self {
            algebra: algebra.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(algebra: &Arc<LieAlgebra>, c: Complex64) -> Self {
        let mut e = Self::zero(algebra);
        e.accumulate(vec![0; algebra.dim()], c);
        e
    }

    pub fn one(algebra: &Arc<LieAlgebra>) -> Self {
        Self::scalar(algebra, Complex64::new(1.0, 0.0))
    }

    pub fn generator(algebra: &Arc<LieAlgebra>, i: usize) -> Result<Self> {
        if i >= algebra.dim() {
            return Err(Error::BasisMismatch(format!("generator index {i} out of range")));
        }
        let mut alpha = vec![0; algebra.dim()];
        alpha[i] = 1;
        Self::monomial(algebra, alpha, Complex64::new(1.0, 0.0))
    }

    pub fn generator_by_label(algebra: &Arc<LieAlgebra>, label: &str) -> Result<Self> {
        let i = algebra
            .index_of(label)
            .ok_or_else(|| Error::BasisMismatch(format!("no generator labelled `{label}`")))?;
        Self::generator(algebra, i)
    }

    /// `c · X^α`.
    pub fn monomial(algebra: &Arc<LieAlgebra>, alpha: MultiIndex, c: Complex64) -> Result<Self> {
        if alpha.len() != algebra.dim() {
            return Err(Error::BasisMismatch(format!(
                "multi-index of length {} for a basis of size {}",
                alpha.len(),
                algebra.dim()
            )));
        }
        let mut e = Self::zero(algebra);
        e.accumulate(alpha, c);
        Ok(e)
    }

    /// Normal form of the word `X_{w_1} X_{w_2} ⋯`, scaled by `c`.
    pub fn from_word(algebra: &Arc<LieAlgebra>, word: &[usize], c: Complex64) -> Result<Self> {
        if let Some(&bad) = word.iter().find(|&&i| i >= algebra.dim()) {
            return Err(Error::BasisMismatch(format!("generator index {bad} out of range")));
        }
        let mut e = Self::zero(algebra);
        e.normal_order_into(word.to_vec(), c);
        Ok(e)
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &[u32]) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Maximal total degree `|α|` (0 for the zero element).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    fn accumulate(&mut self, alpha: MultiIndex, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(alpha).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            let key: Vec<u32> = self
                .terms
                .iter()
                .find(|(_, v)| **v == Complex64::new(0.0, 0.0))
                .map(|(k, _)| k.clone())
                .expect("zero entry exists");
            self.terms.remove(&key);
        }
    }

    fn normal_order_into(&mut self, word: Vec<usize>, c: Complex64) {
        let mut stack = vec![(word, c)];
        while let Some((word, c)) = stack.pop() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            match word.windows(2).position(|w| w[0] > w[1]) {
                None => {
                    let mut alpha = vec![0u32; self.algebra.dim()];
                    for &i in &word {
                        alpha[i] += 1;
                    }
                    self.accumulate(alpha, c);
                }
                Some(p) => {
                    let (j, i) = (word[p], word[p + 1]);
                    let mut swapped = word.clone();
                    swapped.swap(p, p + 1);
                    // X_j X_i = X_i X_j + [X_j, X_i]
                    for &(k, ck) in self.algebra.bracket(j, i) {
                        let mut w = Vec::with_capacity(word.len() - 1);
                        w.extend_from_slice(&word[..p]);
                        w.push(k);
                        w.extend_from_slice(&word[p + 2..]);
                        stack.push((w, c * ck));
                    }
                    stack.push((swapped, c));
                }
            }
        }
    }

    fn check_same_algebra(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra {
            Ok(())
        } else {
            Err(Error::BasisMismatch("elements live in different enveloping algebras".into()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_algebra(other)?;
        let mut out = self.clone();
        for (a, &c) in &other.terms {
            out.accumulate(a.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (a, &v) in &self.terms {
            out.accumulate(a.clone(), v * c);
        }
        out
    }

    /// Normal-ordered product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_algebra(other)?;
        let mut out = Self::zero(&self.algebra);
        for (a, &ca) in &self.terms {
            let wa = word_of(a);
            for (b, &cb) in &other.terms {
                let mut w = wa.clone();
                w.extend(word_of(b));
                out.normal_order_into(w, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.algebra);
        for _ in 0..n {
            out = out.mul(self).expect("same algebra");
        }
        out
    }

    /// Transpose: the anti-automorphism with `^tX = -X` on generators, so
    /// `^t X^α = (-1)^{|α|} X_l^{α_l} ⋯ X_1^{α_1}`, re-normal-ordered.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (a, &c) in &self.terms {
            let mut w = word_of(a);
            w.reverse();
            let sign = if w.len().is_multiple_of(2) { 1.0 } else { -1.0 };
            out.normal_order_into(w, c * sign);
        }
        out
    }

    /// Conjugate transpose `D* = conj(^tD)`.
    pub fn conjugate_transpose(&self) -> Self {
        let t = self.transpose();
        let mut out = Self::zero(&self.algebra);
        for (a, &c) in &t.terms {
            out.accumulate(a.clone(), c.conj());
        }
        out
    }

    /// The anti-automorphism extending `X_i ↦ -X_i - δ_i` where `δ` is the
    /// derivative of the modular function along each generator.
    pub fn antipode(&self, modular_derivative: &[f64]) -> Result<Self> {
        if modular_derivative.len() != self.algebra.dim() {
            return Err(Error::BasisMismatch("modular derivative has wrong length".into()));
        }
        let images: Vec<UeaElement> = (0..self.algebra.dim())
            .map(|i| {
                let x = Self::generator(&self.algebra, i).expect("index in range");
                x.scale(Complex64::new(-1.0, 0.0))
                    .add(&Self::scalar(&self.algebra, Complex64::new(-modular_derivative[i], 0.0)))
                    .expect("same algebra")
            })
            .collect();
        let mut out = Self::zero(&self.algebra);
        for (a, &c) in &self.terms {
            let mut acc = Self::scalar(&self.algebra, c);
            for &i in word_of(a).iter().rev() {
                acc = acc.mul(&images[i])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Evaluates a one-generator element as the polynomial `Σ c_m x^m`.
    pub fn eval_polynomial(&self, x: Complex64) -> Result<Complex64> {
        if self.algebra.dim() != 1 {
            return Err(Error::BasisMismatch("polynomial evaluation needs a single generator".into()));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, &c) in &self.terms {
            acc += c * x.powu(a[0]);
        }
        Ok(acc)
    }
}

/// The word `X_1^{α_1} ⋯ X_l^{α_l}` as a generator sequence.
pub fn word_of(alpha: &[u32]) -> Vec<usize> {
    alpha
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| core::iter::repeat_n(i, n as usize))
        .collect()
}

impl fmt::Display for UeaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for (i, &e) in a.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·{}", self.algebra.labels[i])?,
                    _ => write!(f, "·{}^{}", self.algebra.labels[i], e)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn heis() -> Arc<LieAlgebra> {
        Arc::new(LieAlgebra::heisenberg())
    }

    #[test]
    fn torus_square() {
        let alg = Arc::new(LieAlgebra::torus());
        let x = UeaElement::generator(&alg, 0).unwrap();
        let x2 = x.mul(&x).unwrap();
        assert_eq!(x2, UeaElement::monomial(&alg, vec![2], c(1.0)).unwrap());
    }

    #[test]
    fn qp_normal_orders_to_pq_minus_z() {
        let alg = heis();
        let p = UeaElement::generator(&alg, 0).unwrap();
        let q = UeaElement::generator(&alg, 1).unwrap();
        let z = UeaElement::generator(&alg, 2).unwrap();
        let qp = q.mul(&p).unwrap();
        let expect = p.mul(&q).unwrap().sub(&z).unwrap();
        assert_eq!(qp, expect);
        assert_eq!(qp.coefficient(&[1, 1, 0]), c(1.0));
        assert_eq!(qp.coefficient(&[0, 0, 1]), c(-1.0));
    }

    #[test]
    fn central_z_commutes_through() {
        let alg = heis();
        let p = UeaElement::generator(&alg, 0).unwrap();
        let q = UeaElement::generator(&alg, 1).unwrap();
        let z = UeaElement::generator(&alg, 2).unwrap();
        let lhs = p.mul(&q.mul(&z).unwrap()).unwrap();
        assert_eq!(lhs, UeaElement::monomial(&alg, vec![1, 1, 1], c(1.0)).unwrap());
        let zq = z.mul(&q).unwrap();
        assert_eq!(zq, q.mul(&z).unwrap());
    }

    #[test]
    fn transpose_examples() {
        let alg = Arc::new(LieAlgebra::torus());
        let x = UeaElement::generator(&alg, 0).unwrap();
        assert_eq!(x.transpose(), x.scale(c(-1.0)));
        let x2 = x.pow(2);
        assert_eq!(x2.transpose(), x2);

        let alg = heis();
        let p = UeaElement::generator(&alg, 0).unwrap();
        let q = UeaElement::generator(&alg, 1).unwrap();
        let z = UeaElement::generator(&alg, 2).unwrap();
        let pq = p.mul(&q).unwrap();
        assert_eq!(pq.transpose(), pq.sub(&z).unwrap());
    }

    #[test]
    fn antipode_matches_transpose_when_unimodular() {
        let alg = heis();
        let p = UeaElement::generator(&alg, 0).unwrap();
        let q = UeaElement::generator(&alg, 1).unwrap();
        let pq = p.mul(&q).unwrap();
        assert_eq!(pq.antipode(&[0.0; 3]).unwrap(), pq.transpose());
        let one = UeaElement::one(&alg);
        assert_eq!(one.antipode(&[0.0; 3]).unwrap(), one);
    }

    #[test]
    fn antipode_with_modular_derivative() {
        // A(X) = -X - δ, A(X²) = (X + δ)² = X² + 2δX + δ²
        let alg = Arc::new(LieAlgebra::torus());
        let x = UeaElement::generator(&alg, 0).unwrap();
        let a = x.pow(2).antipode(&[3.0]).unwrap();
        assert_eq!(a.coefficient(&[2]), c(1.0));
        assert_eq!(a.coefficient(&[1]), c(6.0));
        assert_eq!(a.coefficient(&[0]), c(9.0));
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let t = Arc::new(LieAlgebra::torus());
        let h = heis();
        let x = UeaElement::generator(&t, 0).unwrap();
        let p = UeaElement::generator(&h, 0).unwrap();
        assert!(matches!(x.mul(&p), Err(Error::BasisMismatch(_))));
        assert!(UeaElement::monomial(&h, vec![1], c(1.0)).is_err());
    }

    #[test]
    fn inconsistent_relations_rejected() {
        let labels = vec!["A".to_string(), "B".to_string()];
        let r = LieAlgebra::new(
            labels.clone(),
            &[(0, 1, vec![(0, c(1.0))]), (1, 0, vec![(0, c(1.0))])],
        );
        assert!(r.is_err());
        let r = LieAlgebra::new(labels, &[(0, 1, vec![(0, c(1.0))]), (1, 0, vec![(0, c(-1.0))])]);
        assert!(r.is_ok());
    }

    #[test]
    fn conjugate_transpose_conjugates() {
        let alg = heis();
        let p = UeaElement::generator(&alg, 0).unwrap().scale(Complex64::new(0.0, 2.0));
        // ^t(2i P) = -2i P, conj -> 2i P
        assert_eq!(p.conjugate_transpose(), p);
    }

    #[test]
    fn display_is_readable() {
        let alg = heis();
        let q = UeaElement::generator(&alg, 1).unwrap();
        let p = UeaElement::generator(&alg, 0).unwrap();
        let s = q.mul(&p).unwrap().to_string();
        assert_eq!(s, "-1·Z + 1·P·Q");
    }
}
