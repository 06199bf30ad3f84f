//! JSON form of [`CoefficientVector`].
//!
//! ```json
//! {
//!   "index_domain": "integers",
//!   "start": -1,
//!   "coefficients": [[1.0, 0.0], [0.5, -0.5]],
//!   "tail": { "name": "geometric", "params": [0.5] },
//!   "envelope": { "constant": 1.0, "degree": -12.0 },
//!   "class": "rapid_decay"
//! }
//! ```
//!
//! The stored prefix covers `start..start + coefficients.len()`; a missing
//! `tail` means zero outside it.

use gmc_core::{CoefficientVector, Complex64, Formula, GrowthClass, GrowthEnvelope, IndexDomain, Tail};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainDoc {
    Integers,
    Naturals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassDoc {
    RapidDecay,
    SquareSummable,
    PolynomialGrowth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailDoc {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeDoc {
    pub constant: f64,
    pub degree: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorDoc {
    pub index_domain: DomainDoc,
    pub start: i64,
    pub coefficients: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailDoc>,
    pub envelope: EnvelopeDoc,
    pub class: ClassDoc,
}

impl From<IndexDomain> for DomainDoc {
    fn from(d: IndexDomain) -> Self {
        match d {
            IndexDomain::Integers => Self::Integers,
            IndexDomain::Naturals => Self::Naturals,
        }
    }
}

impl From<DomainDoc> for IndexDomain {
    fn from(d: DomainDoc) -> Self {
        match d {
            DomainDoc::Integers => Self::Integers,
            DomainDoc::Naturals => Self::Naturals,
        }
    }
}

impl From<GrowthClass> for ClassDoc {
    fn from(c: GrowthClass) -> Self {
        match c {
            GrowthClass::RapidDecay => Self::RapidDecay,
            GrowthClass::SquareSummable => Self::SquareSummable,
            GrowthClass::PolynomialGrowth => Self::PolynomialGrowth,
        }
    }
}

impl From<ClassDoc> for GrowthClass {
    fn from(c: ClassDoc) -> Self {
        match c {
            ClassDoc::RapidDecay => Self::RapidDecay,
            ClassDoc::SquareSummable => Self::SquareSummable,
            ClassDoc::PolynomialGrowth => Self::PolynomialGrowth,
        }
    }
}

impl VectorDoc {
    /// Fails for tails built from derived (unregistered) formulas.
    pub fn from_vector(v: &CoefficientVector) -> Result<Self, CliError> {
        let tail = match v.tail() {
            Tail::Zero => None,
            Tail::Formula(f) if f.is_serializable() => Some(TailDoc {
                name: f.name().to_string(),
                params: f.params().to_vec(),
            }),
            Tail::Formula(f) => {
                return Err(CliError::Precondition(format!(
                    "tail formula `{}` is derived and cannot be serialized",
                    f.name()
                )))
            }
        };
        Ok(Self {
            index_domain: v.domain().into(),
            start: v.start(),
            coefficients: v.prefix().iter().map(|c| [c.re, c.im]).collect(),
            tail,
            envelope: EnvelopeDoc {
                constant: v.envelope().constant(),
                degree: v.envelope().degree(),
            },
            class: v.class().into(),
        })
    }

    /// Rebuilds the vector, re-validating the envelope.
    pub fn to_vector(&self) -> Result<CoefficientVector, CliError> {
        let tail = match &self.tail {
            None => Tail::Zero,
            Some(t) => Tail::Formula(Formula::registered(&t.name, &t.params)?),
        };
        Ok(CoefficientVector::new(
            self.index_domain.into(),
            self.start,
            self.coefficients.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
            tail,
            GrowthEnvelope::new(self.envelope.constant, self.envelope.degree)?,
            self.class.into(),
        )?)
    }
}

pub fn to_json(v: &CoefficientVector) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(&VectorDoc::from_vector(v)?)?)
}

pub fn from_json(s: &str) -> Result<CoefficientVector, CliError> {
    serde_json::from_str::<VectorDoc>(s)?.to_vector()
}

#[cfg(test)]
mod tests {
    use super::*;
    use gmc_core::heisenberg::{dirac_delta, HermiteVector};
    use gmc_core::torus::TorusSequence;

    fn same(a: &CoefficientVector, b: &CoefficientVector) {
        assert_eq!(a.domain(), b.domain());
        assert_eq!(a.class(), b.class());
        assert_eq!(a.envelope(), b.envelope());
        for k in -50..50 {
            assert_eq!(a.coeff(k), b.coeff(k), "{k}");
        }
    }

    #[test]
    fn round_trips() {
        let vs = [
            TorusSequence::comb().into_vector(),
            TorusSequence::poly(1.5).unwrap().into_vector(),
            TorusSequence::finite(-2, vec![Complex64::new(1.0, -1.0), Complex64::new(0.5, 0.0)]).unwrap().into_vector(),
            dirac_delta().into_vector(),
            HermiteVector::gauss().into_vector(),
        ];
        for v in &vs {
            same(v, &from_json(&to_json(v).unwrap()).unwrap());
        }
    }

    #[test]
    fn rejects_unknown_keys_and_bad_envelopes() {
        let bad = r#"{"index_domain":"integers","start":0,"coefficients":[[2.0,0.0]],
            "envelope":{"constant":1.0,"degree":0.0},"class":"rapid_decay"}"#;
        assert!(from_json(bad).is_err());
        let extra = r#"{"index_domain":"integers","start":0,"coefficients":[],"colour":1,
            "envelope":{"constant":1.0,"degree":0.0},"class":"rapid_decay"}"#;
        assert!(from_json(extra).is_err());
    }

    #[test]
    fn derived_tails_are_not_serializable() {
        let x = gmc_core::UeaElement::generator(&std::sync::Arc::new(gmc_core::LieAlgebra::torus()), 0).unwrap();
        let v = gmc_core::torus::act_algebra(&x, &TorusSequence::comb()).unwrap();
        assert!(matches!(to_json(v.vector()), Err(CliError::Precondition(_))));
    }
}
